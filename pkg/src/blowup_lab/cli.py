"""``blowup-lab`` command-line front end.

Exit codes: 0 pass, 1 check failed or module error, 2 inconclusive, 64 usage error.
JSON artifacts embed the run configuration and are deterministic for a given
configuration; wall-clock timings go to a ``*.timing.json`` sidecar.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import checks
from . import evolve as ev
from .norms import check_corpus, corpus
from .profiles import (
    BlowupFamily,
    BoostKernel,
    ball_points,
    pde_residual,
    positivity_on_ball,
    profile_constants,
    scaling_exponents,
)
from .resolvent import density_lambda, density_residual, multiplicity_witnesses, solve_resolvent_mode
from .scan import (
    PrecisionError,
    connection_coefficient_kappa,
    eigenvalue_scan,
    kappa_spectrum,
    kappa_zero_scan,
    spectral_gap,
)
from .series import certify_lemma

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 64
THREADS_ENV = "BLOWUP_LAB_THREADS"
VERDICT_EXIT = {"pass": EXIT_PASS, "fail": EXIT_FAIL, "inconclusive": EXIT_INCONCLUSIVE}

# precision modes each command can honour; the first entry is the default
PRECISIONS = {
    "verify-profiles": ("exact", "f64", "f128"),
    "certify": ("exact",),
    "scan": ("f64",),
    "kappa-spectrum": ("f64",),
    "resolvent": ("f64",),
    "witnesses": ("f64",),
    "dissipativity": ("exact",),
    "evolve": ("f64",),
    "tune": ("f64",),
    "suite": ("f64",),
    "run": ("f64",),
    "plot-script": ("f64",),
}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# parsing helpers

def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}")
    if not lo < hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _grid(text: str) -> tuple[int, int]:
    try:
        a, b = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected NxM, got {text!r}")
    if a < 2 or b < 2:
        raise argparse.ArgumentTypeError("grid needs at least 2 points per axis")
    return a, b


def _coeffs(text: str, prefix: str) -> list[float]:
    if not text.startswith(prefix + ":"):
        raise UsageError(f"expected '{prefix}:c0,c1,...', got {text!r}")
    try:
        return [float(Fraction(v)) for v in text[len(prefix) + 1:].split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad coefficient list {text!r}: {exc}")


def parse_forcing(text: str):
    """``poly:c0,c1,...`` as sum c_k rho^k."""
    c = _coeffs(text, "poly")
    return lambda r: sum(ck * np.asarray(r, float) ** k for k, ck in enumerate(c)) + 0 * np.asarray(r, float)


def parse_radial(text: str | None):
    """``poly-even:c0,c1,...`` as sum c_k rho^(2k); ``None`` is the zero function."""
    if text is None:
        return None
    return ev.even_polynomial(_coeffs(text, "poly-even"))


def _boost(text: str | None, d: int, exact: bool) -> BoostKernel | None:
    if text is None:
        return None
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if parts.count("...") == 1:
        i = parts.index("...")
        parts = parts[:i] + ["0"] * (d - len(parts) + 1) + parts[i + 1:]
    if len(parts) != d:
        raise UsageError(f"boost needs {d} components, got {len(parts)}")
    if exact:
        values = [Fraction(p) for p in parts]
        if any(values):
            raise UsageError("exact mode takes rational exponentials via --boost-exp, not rapidities")
        return None
    return BoostKernel.from_rapidities([float(p) for p in parts])


# ---------------------------------------------------------------------------
# output

def _config(args: argparse.Namespace) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("func",) and v is not None}
    return json.loads(json.dumps(cfg, default=str))


def _dump(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialize {type(o).__name__}")


TIMING_KEYS = ("elapsed-s", "seconds")


def _strip_timing(obj):
    """Drop wall-clock fields so artifacts are byte-identical across reruns."""
    if isinstance(obj, dict):
        return {k: _strip_timing(v) for k, v in obj.items() if k not in TIMING_KEYS}
    if isinstance(obj, list):
        return [_strip_timing(v) for v in obj]
    return obj


def emit(args: argparse.Namespace, payload: dict, out: str | None = None, seconds: float | None = None) -> None:
    payload = _strip_timing({"config": _config(args), **payload})
    text = _dump(payload)
    path = out if out is not None else getattr(args, "out", None)
    if path and not path.endswith(".csv"):
        Path(path).write_text(text)
        if seconds is not None:
            Path(path + ".timing.json").write_text(_dump({"wall-clock-s": round(seconds, 3)}))
    else:
        sys.stdout.write(text)


def write_csv(path: str, args: argparse.Namespace, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("# config: " + json.dumps(_config(args), sort_keys=True) + "\n")
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_cell(v) for v in row])


def _cell(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


# ---------------------------------------------------------------------------
# commands

def cmd_verify_profiles(args) -> str:
    exact = args.precision == "exact"
    d = args.d
    if args.boost_exp is not None:
        if not exact:
            raise UsageError("--boost-exp requires --precision exact")
        q = [Fraction(v) for v in args.boost_exp.split(",")]
        if len(q) != d:
            raise UsageError(f"--boost-exp needs {d} components")
        kernel = BoostKernel.from_exponentials(q)
    else:
        kernel = _boost(args.boost, d, exact)
    fam = BlowupFamily(args.family, d, kernel=kernel, precision=args.precision)
    pts = [(t, x) for t, x in checks.cone_points(d)]
    pts += [(Fraction(0), x) for x in ball_points(d, 8, seed=args.seed, exact=True, radius=0.9)]
    worst = 0
    for t, x in pts:
        if not exact:
            t, x = float(t), [float(v) for v in x]
        worst = max(worst, abs(pde_residual(fam, t, x)))
    tol = {"exact": 0, "f64": 1e-10, "f128": 1e-25}[args.precision]
    out = {"residual-max": str(worst) if exact else float(worst), "residual-tolerance": tol}
    ok = worst <= tol
    if args.family == "u-star":
        pos = positivity_on_ball(fam, resolution=args.resolution)
        out["positivity-min"] = pos.minimum
        out["positivity-argmin"] = list(pos.argmin)
        out["positivity-verdict"] = pos.verdict
        ok &= pos.verdict != "negative"
        if all(float(v) == 0 for v in fam.kernel.sinh):
            out["scaling-exponents"] = {str(k): v for k, v in scaling_exponents(fam).items()}
    verdict = "pass" if ok else "fail"
    if ok and args.family == "u-star" and out["positivity-verdict"] == "inconclusive":
        verdict = "inconclusive"
    emit(args, {"anchor": "profile-exactness", **out, "verdict": verdict})
    return verdict


def cmd_certify(args) -> str:
    cert = certify_lemma(args.ell_class)
    emit(args, {"anchor": cert.lemma_id, **cert.to_json(with_polynomials=not args.brief)}, seconds=cert.elapsed)
    return cert.verdict


def cmd_scan(args) -> str:
    region = (*args.re, *args.im)
    t0 = time.perf_counter()
    res = eigenvalue_scan(args.d, args.ell, region, potential=args.potential, grid=args.grid)
    roots = [{"re": r.lam.real, "im": r.lam.imag, "multiplicity": r.multiplicity,
              "indicator": r.indicator, "exceptional": r.exceptional} for r in res.roots]
    verdict = "inconclusive" if res.exploratory else "pass"
    payload = {"anchor": "spectrum-u-star" if args.potential == "u-star" else f"spectrum-{args.potential}",
               "roots": roots, "total-winding": res.total_winding, "exploratory": res.exploratory,
               "diagnostics": res.diagnostics, "verdict": verdict}
    if args.gap:
        gap = spectral_gap(args.d, args.ell)
        payload["spectral-gap"] = {"value": gap.gap, "lower-bound-only": gap.is_lower_bound,
                                   "strip": [gap.floor, 0.0]}
    if args.out:
        rows = ([z.real, z.imag, float(v)] for z, v in zip(res.grid, res.grid_values)) if res.grid is not None else []
        write_csv(args.out, args, ["re", "im", "abs-indicator"], rows)
        emit(args, payload, out=args.out + ".roots.json", seconds=time.perf_counter() - t0)
    else:
        emit(args, payload)
    return verdict


def cmd_kappa_spectrum(args) -> str:
    eigs = kappa_spectrum(args.d, args.ell, args.sigma)
    zeros = kappa_zero_scan(args.d, args.ell, max(args.sigma, -0.5), args.hi)
    coeff = {str(lam): abs(connection_coefficient_kappa(args.d, args.ell, lam).value) for lam in eigs}
    agree = [Fraction(v) for v in eigs if v <= args.hi] == zeros
    verdict = "pass" if agree else "fail"
    emit(args, {"anchor": "spectrum-kappa", "eigenvalues": eigs, "connection-zeros": [str(z) for z in zeros],
                "coefficient-at-eigenvalues": coeff, "methods-agree": agree, "verdict": verdict})
    return verdict


def cmd_resolvent(args) -> str:
    lam = density_lambda(args.d)
    if not math.isclose(args.lam, lam):
        raise UsageError(f"resolvent solves are provided at lambda = {lam} for d = {args.d}")
    g = parse_forcing(args.forcing)
    mode = solve_resolvent_mode(g, args.ell, args.d, n=args.n)
    rho = mode.rho
    du, ddu = mode.derivative(1), mode.derivative(2)
    pointwise = np.full_like(rho, np.nan)
    inner = rho > 0
    pointwise[inner] = density_residual(rho[inner], mode.values[inner], du[inner], ddu[inner],
                                        g(rho[inner]), args.d, args.ell)
    verdict = "pass" if mode.residual <= args.tol else "fail"
    payload = {"anchor": "resolvent-density", "lambda": lam, "ell": args.ell, "residual": mode.residual,
               "parity-defect": mode.parity_defect, "boundary-slopes": list(mode.boundary_slopes),
               "verdict": verdict}
    if args.out:
        write_csv(args.out, args, ["rho", "u", "residual"], zip(rho.tolist(), mode.values.tolist(), pointwise.tolist()))
        emit(args, payload, out=args.out + ".json")
    else:
        emit(args, payload)
    return verdict


def cmd_witnesses(args) -> str:
    rep = multiplicity_witnesses()
    emit(args, {"anchor": "multiplicity-witnesses", **rep.to_json()})
    return rep.verdict


def cmd_dissipativity(args) -> str:
    t0 = time.perf_counter()
    rep = check_corpus(corpus(args.d, args.corpus, args.degree, args.seed), args.k)
    verdict = "pass" if not rep.failures else "fail"
    if verdict == "pass" and rep.exploratory:
        verdict = "inconclusive"
    emit(args, {"anchor": "dissipativity", **rep.to_json(), "verdict": verdict}, seconds=time.perf_counter() - t0)
    return verdict


def cmd_evolve(args) -> str:
    grid = ev.make_grid(args.N, args.d, args.grid)
    state = ev.upsilon_data(args.family, args.d, grid, parse_radial(args.f), parse_radial(args.g), args.T, args.alpha)
    tr = ev.evolve(state, grid, args.tau_end, record_every=args.record_every)
    names = ["h", "g"]
    header = ["tau", "distance", "amp_h", "amp_g", "sup", "min_psi1"]
    rows = ([t, tr.distance[i], *(tr.amplitudes[n][i] if n in tr.amplitudes else "" for n in names),
             tr.sup[i], tr.min_psi1[i]] for i, t in enumerate(tr.taus))
    if args.out:
        write_csv(args.out, args, header, rows)
    verdict = "inconclusive" if tr.diverged else "pass"
    emit(args, {"anchor": "evolution", "diverged": tr.diverged, "last-tau": tr.last_tau,
                "final-distance": tr.distance[-1], "min-psi1": min(tr.min_psi1), "verdict": verdict},
         out=(args.out + ".json") if args.out else None)
    return verdict


def cmd_tune(args) -> str:
    grid = ev.make_grid(args.N, args.d, args.grid)
    res = ev.tune(args.family, args.d, grid, parse_radial(args.f), parse_radial(args.g), delta=args.delta)
    payload = {"anchor": "tuned-stability", "T*": res.params.T, "alpha*": res.params.alpha, **res.to_json()}
    if res.trajectory is not None:
        payload["min-psi1"] = min(res.trajectory.min_psi1)
    verdict = {"pass": "pass", "fail": "fail"}.get(res.verdict, "inconclusive")
    emit(args, payload)
    return verdict


def cmd_suite(args) -> str:
    name = args.name
    if name not in checks.SUITES:
        raise UsageError(f"unknown suite {name!r}; choose from {sorted(checks.SUITES)}")
    threads = max(1, int(os.environ.get(THREADS_ENV, "1")))
    t0 = time.perf_counter()
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(lambda f: f(), checks.SUITES[name]))
    binding = [r for r in results if not r.exploratory]
    if any(r.passed is False for r in binding):
        verdict = "fail"
    elif any(r.passed is None for r in binding):
        verdict = "inconclusive"
    else:
        verdict = "pass"
    entries = {r.anchor: r.to_json() for r in results}
    emit(args, {"suite": name, "checks": entries, "verdict": verdict}, seconds=time.perf_counter() - t0)
    if args.out:
        Path(args.out + ".timing.json").write_text(
            _dump({"wall-clock-s": round(time.perf_counter() - t0, 3),
                   "per-check-s": {r.anchor: round(r.seconds, 3) for r in results}}))
    for r in results:
        print(f"{r.verdict.upper():13s} {r.anchor:24s} {r.seconds:8.2f}s  {r.title}", file=sys.stderr)
    return verdict


def cmd_plot_script(args) -> str:
    src = Path(args.csv)
    if not src.exists():
        raise UsageError(f"no such file: {src}")
    if args.kind == "trajectory":
        body = (f"set datafile separator ','\nset key autotitle columnhead\nset logscale y\n"
                f"set xlabel 'tau'\nplot '{src}' using 1:2 with lines, '' using 1:(abs($3)) with lines, "
                f"'' using 1:(abs($4)) with lines\n")
    else:
        body = (f"set datafile separator ','\nset xlabel 'Re lambda'\nset ylabel 'Im lambda'\nset view map\n"
                f"set logscale cb\nsplot '{src}' using 1:2:3 every ::1 with points pt 5 ps 0.5 palette\n")
    out = Path(args.out) if args.out else None
    if out:
        out.write_text(body)
    else:
        sys.stdout.write(body)
    return "pass"


# ---------------------------------------------------------------------------
# parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="blowup-lab", description="Verification toolkit for self-similar blowup of u_tt - Δu = u^2.")
    p.add_argument("--precision", choices=("exact", "f64", "f128"), default=None,
                   help="numeric mode; defaults to the command's native mode")
    p.add_argument("--seed", type=int, default=42, help="RNG seed for corpora and sample points")
    # the same options after the subcommand; SUPPRESS keeps the global value unless given
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", choices=("exact", "f64", "f128"), default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add = sub.add_parser
    sub.add_parser = lambda *a, **kw: _add(*a, parents=[common], **kw)

    s = sub.add_parser("verify-profiles", help="PDE residual, positivity and scaling of a profile family")
    s.add_argument("--d", type=int, default=9)
    s.add_argument("--family", choices=("u-star", "kappa"), default="u-star")
    s.add_argument("--boost", help="comma-separated rapidities; one '...' entry pads with zeros")
    s.add_argument("--boost-exp", help="comma-separated rational exp(a_j) for exact boosts")
    s.add_argument("--resolution", type=int, default=200)
    s.add_argument("--out")
    s.set_defaults(func=cmd_verify_profiles)

    s = sub.add_parser("certify", help="exact certificate of a ratio-bound lemma")
    s.add_argument("--ell-class", choices=("0", "1", "ge2"), required=True)
    s.add_argument("--brief", action="store_true", help="omit certificate polynomials")
    s.add_argument("--out")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("scan", help="argument-principle eigenvalue scan")
    s.add_argument("--d", type=int, default=9)
    s.add_argument("--ell", type=int, default=0)
    s.add_argument("--re", type=_range, default=(0.0, 4.0))
    s.add_argument("--im", type=_range, default=(-2.0, 2.0))
    s.add_argument("--grid", type=_grid)
    s.add_argument("--potential", choices=("u-star", "kappa", "free"), default="u-star")
    s.add_argument("--gap", action="store_true", help="also report the empirical gap in -0.4 <= Re lam < 0")
    s.add_argument("--out", help="CSV of the indicator grid; roots go to OUT.roots.json")
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("kappa-spectrum", help="constant-profile spectrum by two routes")
    s.add_argument("--d", type=int, default=9)
    s.add_argument("--ell", type=int, default=0)
    s.add_argument("--sigma", type=float, default=0.0)
    s.add_argument("--hi", type=float, default=6.0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_kappa_spectrum)

    s = sub.add_parser("resolvent", help="per-mode resolvent solve at the density point")
    s.add_argument("--d", type=int, default=9)
    s.add_argument("--lambda", dest="lam", type=float, default=2.5)
    s.add_argument("--ell", type=int, default=0)
    s.add_argument("--forcing", default="poly:1")
    s.add_argument("--n", type=int, default=48)
    s.add_argument("--tol", type=float, default=1e-8)
    s.add_argument("--out", help="CSV rho, u, residual; summary to OUT.json")
    s.set_defaults(func=cmd_resolvent)

    s = sub.add_parser("witnesses", help="algebraic simplicity witnesses")
    s.add_argument("--out")
    s.set_defaults(func=cmd_witnesses)

    s = sub.add_parser("dissipativity", help="exact dissipativity gap on a random corpus")
    s.add_argument("--d", type=int, default=9)
    s.add_argument("--k", type=int, default=5)
    s.add_argument("--corpus", type=int, default=500)
    s.add_argument("--degree", type=int, default=6)
    s.add_argument("--out")
    s.set_defaults(func=cmd_dissipativity)

    for name, helptext in (("evolve", "radial nonlinear evolution in similarity variables"),
                           ("tune", "tune blowup time and correction amplitude")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--family", choices=("u-star", "kappa"), default="u-star")
        s.add_argument("--d", type=int, default=9)
        s.add_argument("--N", type=int, default=512)
        s.add_argument("--grid", choices=("fd", "chebyshev"), default="fd")
        s.add_argument("--f", help="first-component perturbation 'poly-even:c0,c1,...'")
        s.add_argument("--g", help="second-component perturbation 'poly-even:c0,c1,...'")
        s.add_argument("--out")
        if name == "evolve":
            s.add_argument("--T", type=float, default=1.0)
            s.add_argument("--alpha", type=float, default=0.0)
            s.add_argument("--tau-end", type=float, default=10.0)
            s.add_argument("--record-every", type=float, default=0.1)
            s.set_defaults(func=cmd_evolve)
        else:
            s.add_argument("--delta", type=float, default=0.05)
            s.set_defaults(func=cmd_tune)

    s = sub.add_parser("suite", help="run a named check suite")
    s.add_argument("name", help="quick | paper-checks | stress")
    s.add_argument("--out")
    s.set_defaults(func=cmd_suite)

    s = sub.add_parser("run", help="run a named check suite (alias of 'suite')")
    s.add_argument("--suite", dest="name", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_suite)

    s = sub.add_parser("plot-script", help="emit a gnuplot script for a CSV artifact")
    s.add_argument("--csv", required=True)
    s.add_argument("--kind", choices=("trajectory", "scan"), default="trajectory")
    s.add_argument("--out")
    s.set_defaults(func=cmd_plot_script)
    return p


RANGE_OPTIONS = ("--re", "--im")


def _join_ranges(argv: list[str]) -> list[str]:
    """Attach range values such as ``-2:2`` to their option so they are not read as flags."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] in RANGE_OPTIONS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def _default_precision(args: argparse.Namespace) -> str:
    if args.command == "verify-profiles":
        irrational = not profile_constants(args.d, "f64").exact if args.d >= 7 else False
        return "f64" if args.boost is not None or irrational else "exact"
    return PRECISIONS[args.command][0]


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_join_ranges(list(sys.argv[1:] if argv is None else argv)))
    allowed = PRECISIONS[args.command]
    if args.precision is None:
        args.precision = _default_precision(args)
    elif args.precision not in allowed:
        parser.error(f"{args.command} supports --precision {'|'.join(allowed)}")
    try:
        verdict = args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (PrecisionError, ev.ConditioningError) as exc:
        _diagnostic(exc)
        return EXIT_INCONCLUSIVE
    except (ValueError, ZeroDivisionError) as exc:
        _diagnostic(exc)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - report any module failure as structured output
        _diagnostic(exc)
        return EXIT_FAIL
    return VERDICT_EXIT[verdict]


def _diagnostic(exc: BaseException) -> None:
    print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
