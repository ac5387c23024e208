import csv
import json
import shutil
import subprocess
import sys

import pytest

from blowup_lab.cli import EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_PASS, EXIT_USAGE, main


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _json(capsys, *argv):
    code, out, err = _run(capsys, *argv)
    return code, json.loads(out)


# ---------------------------------------------------------------------------
# exit codes

def test_pass_exit_and_payload(capsys):
    code, doc = _json(capsys, "scan", "--d", "9", "--ell", "0", "--gap")
    assert code == EXIT_PASS
    assert [round(r["re"], 6) for r in doc["roots"]] == [1.0, 3.0]
    assert doc["spectral-gap"]["value"] == pytest.approx(0.4)
    assert doc["spectral-gap"]["lower-bound-only"] is True


def test_fail_exit_when_tolerance_is_unmet(capsys):
    code, doc = _json(capsys, "resolvent", "--forcing", "poly:1", "--tol", "0")
    assert code == EXIT_FAIL
    assert doc["verdict"] == "fail"


def test_inconclusive_exit_outside_verified_dimensions(capsys):
    code, doc = _json(capsys, "scan", "--d", "7", "--ell", "2", "--re", "0:2", "--im", "-1:1")
    assert code == EXIT_INCONCLUSIVE
    assert doc["exploratory"] is True


def test_usage_exit_for_bad_arguments(capsys):
    with pytest.raises(SystemExit) as info:
        main(["scan", "--ell", "zero"])
    assert info.value.code == EXIT_USAGE


def test_usage_exit_for_unsupported_lambda(capsys):
    with pytest.raises(SystemExit) as info:
        main(["resolvent", "--lambda", "1.0"])
    assert info.value.code == EXIT_USAGE


def test_usage_exit_for_unknown_suite(capsys):
    with pytest.raises(SystemExit) as info:
        main(["suite", "nonexistent"])
    assert info.value.code == EXIT_USAGE


def test_usage_exit_for_disallowed_precision(capsys):
    with pytest.raises(SystemExit) as info:
        main(["certify", "--ell-class", "0", "--precision", "f64"])
    assert info.value.code == EXIT_USAGE


def test_module_errors_become_structured_diagnostics(capsys):
    code, _, err = _run(capsys, "evolve", "--N", "20", "--T", "2.0")
    assert code == EXIT_USAGE
    assert json.loads(err.strip().splitlines()[-1])["error"] == "ValueError"


# ---------------------------------------------------------------------------
# subcommands

def test_certify_brief(capsys):
    code, doc = _json(capsys, "certify", "--ell-class", "ge2", "--brief")
    assert code == EXIT_PASS
    assert doc["bounds"] == {"start-index": 3, "delta-bound": "1/3"}
    assert all("certificate" not in c or c["certificate"].get("polynomial") is None for c in doc["checks"])


def test_kappa_spectrum_routes_agree(capsys):
    code, doc = _json(capsys, "kappa-spectrum", "--d", "9", "--ell", "0")
    assert code == EXIT_PASS
    assert doc["methods-agree"] is True
    assert doc["eigenvalues"][0] == 1


def test_verify_profiles_exact(capsys):
    code, doc = _json(capsys, "verify-profiles", "--d", "9", "--resolution", "40")
    assert code == EXIT_PASS
    assert doc["config"]["precision"] == "exact"


def test_dissipativity_small_corpus(capsys):
    code, doc = _json(capsys, "dissipativity", "--corpus", "10", "--degree", "4")
    assert code == EXIT_PASS
    assert doc["failures"] == [] and doc["max-gap-float"] <= 0


def test_witnesses(capsys):
    code, doc = _json(capsys, "witnesses")
    assert code == EXIT_PASS
    assert doc["verdict"] == "pass"


def test_tune_unperturbed(capsys):
    code, doc = _json(capsys, "tune", "--N", "40")
    assert code == EXIT_PASS
    assert (doc["T*"], doc["alpha*"]) == (1.0, 0.0)


# ---------------------------------------------------------------------------
# artifacts

def test_json_artifacts_are_byte_identical_across_reruns(tmp_path, capsys):
    path = tmp_path / "cert.json"
    runs = []
    for _ in range(2):
        assert main(["certify", "--ell-class", "1", "--out", str(path)]) == EXIT_PASS
        runs.append(path.read_bytes())
    assert runs[0] == runs[1]
    assert b"elapsed-s" not in runs[0]
    assert json.loads((tmp_path / "cert.json.timing.json").read_text())["wall-clock-s"] >= 0


def test_evolve_csv_header_and_config_line(tmp_path, capsys):
    out = tmp_path / "traj.csv"
    code = main(["evolve", "--N", "30", "--tau-end", "0.5", "--f", "poly-even:1e-4", "--out", str(out)])
    assert code == EXIT_PASS
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# config: ")
    assert json.loads(lines[0][len("# config: "):])["N"] == 30
    rows = list(csv.reader(lines[1:]))
    assert rows[0] == ["tau", "distance", "amp_h", "amp_g", "sup", "min_psi1"]
    assert float(rows[1][0]) == 0.0
    assert json.loads((tmp_path / "traj.csv.json").read_text())["verdict"] == "pass"


def test_scan_csv_and_roots_sidecar(tmp_path, capsys):
    out = tmp_path / "scan.csv"
    assert main(["scan", "--grid", "5x3", "--out", str(out)]) == EXIT_PASS
    rows = list(csv.reader(out.read_text().splitlines()[1:]))
    assert rows[0] == ["re", "im", "abs-indicator"]
    assert len(rows) == 1 + 15
    assert len(json.loads((tmp_path / "scan.csv.roots.json").read_text())["roots"]) == 2


def test_resolvent_csv(tmp_path, capsys):
    out = tmp_path / "res.csv"
    assert main(["resolvent", "--ell", "2", "--forcing", "poly:0,1", "--out", str(out)]) == EXIT_PASS
    rows = list(csv.reader(out.read_text().splitlines()[1:]))
    assert rows[0] == ["rho", "u", "residual"]


def test_plot_script(tmp_path, capsys):
    data = tmp_path / "traj.csv"
    data.write_text("tau,distance\n0,1\n")
    code, out, _ = _run(capsys, "plot-script", "--csv", str(data))
    assert code == EXIT_PASS
    assert str(data) in out and "set logscale y" in out
    with pytest.raises(SystemExit) as info:
        main(["plot-script", "--csv", str(tmp_path / "missing.csv")])
    assert info.value.code == EXIT_USAGE


def test_quick_suite(capsys):
    code, out, err = _run(capsys, "suite", "quick")
    assert code == EXIT_PASS
    doc = json.loads(out)
    assert doc["verdict"] == "pass" and len(doc["checks"]) == 4
    assert sum(line.startswith("PASS") for line in err.splitlines()) == 4


def test_console_script_entry_point():
    exe = shutil.which("blowup-lab")
    cmd = [exe] if exe else [sys.executable, "-m", "blowup_lab.cli"]
    proc = subprocess.run(cmd + ["kappa-spectrum", "--ell", "1"], capture_output=True, text=True)
    assert proc.returncode == EXIT_PASS
    assert json.loads(proc.stdout)["eigenvalues"] == [0]
