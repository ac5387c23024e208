"""Named verification checks with verdicts, used by the suites and the acceptance tests.

Every check returns a :class:`CheckResult` keyed by a stable anchor slug that
names the claim being verified.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import evolve as ev
from .exact import Poly
from .norms import check_corpus, corpus
from .profiles import BlowupFamily, BoostKernel, pde_residual, potential, profile_constants
from .ratfunc import RatFunc
from .resolvent import hypergeo_fundamental, multiplicity_witnesses, solve_resolvent_mode
from .scan import connection_coefficient_kappa, eigenvalue_scan, kappa_spectrum, kappa_zero_scan
from .series import certify_lemma, frobenius_coeffs, lemma_specs, numeric_ratio_scan


@dataclass
class CheckResult:
    anchor: str
    title: str
    passed: bool | None  # None means inconclusive
    values: dict = field(default_factory=dict)
    seconds: float = 0.0
    exploratory: bool = False

    @property
    def verdict(self) -> str:
        return {True: "pass", False: "fail", None: "inconclusive"}[self.passed]

    def to_json(self) -> dict:
        return {"anchor": self.anchor, "title": self.title, "verdict": self.verdict,
                "exploratory": self.exploratory, "seconds": round(self.seconds, 3), "values": self.values}


def _timed(anchor: str, title: str, body: Callable[[], tuple[bool | None, dict]]) -> CheckResult:
    t0 = time.perf_counter()
    passed, values = body()
    return CheckResult(anchor, title, passed, values, time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# profiles

def cone_points(d: int) -> list[tuple[Fraction, list[Fraction]]]:
    """Rational (t, x) samples strictly inside the backward cone of (1, 0)."""
    out = []
    for t, scale in ((Fraction(0), Fraction(1, 3)), (Fraction(1, 2), Fraction(1, 7)), (Fraction(-1, 3), Fraction(2, 3))):
        x = [scale * Fraction((-1) ** j * (j + 1), d + 1) for j in range(d)]
        out.append((t, x))
    return out


def _profile_families(d: int, exact: bool) -> dict[str, BlowupFamily]:
    if exact:
        boost = BoostKernel.from_exponentials([Fraction(11, 10), Fraction(9, 10)] + [1] * (d - 2))
        prec = "exact"
    else:
        boost = BoostKernel.from_rapidities([0.1, -0.05] + [0.0] * (d - 2))
        prec = "f64"
    return {
        "u-star": BlowupFamily("u-star", d, precision=prec),
        "u-star-boosted": BlowupFamily("u-star", d, kernel=boost, precision=prec),
        "kappa-boosted": BlowupFamily("kappa", d, kernel=boost, precision=prec),
    }


def check_profile_exactness(dims=(7, 9)) -> CheckResult:
    def body():
        vals, ok = {}, True
        for d in dims:
            for exact in (True, False):
                for name, fam in _profile_families(d, exact).items():
                    worst = 0
                    for t, x in cone_points(d):
                        r = pde_residual(fam, t if exact else float(t), x if exact else [float(v) for v in x])
                        worst = max(worst, abs(r))
                    key = f"d{d}-{name}-{'exact' if exact else 'f64'}"
                    vals[key] = str(worst) if exact else float(worst)
                    ok &= (worst == 0) if exact else (worst <= 1e-10)
        return ok, vals
    return _timed("profile-exactness", "closed-form profiles solve the wave equation", body)


def check_potential_identity() -> CheckResult:
    def body():
        rho = RatFunc.of(Poly.var("rho"))
        V = potential(profile_constants(9, "exact"), rho)
        ref = 480 * (7 - rho * rho) / (7 + 5 * rho * rho) ** 2
        return (V - ref).is_zero(), {"V": f"({V.num})/({V.den})"}
    return _timed("potential-identity", "linearization potential 2U in closed form", body)


# closed forms of the first Frobenius coefficients, low form, in lambda
RECURRENCE_FORMS = {
    (0, 2): ([Fraction(1, 5544)], [[-3, 1], [-1, 1], [680, 126, 7]]),
    (0, 3): ([Fraction(1, 3027024)], [[-3, 1], [-1, 1], [46080, 84224, 18494, 1519, 49]]),
    (1, 2): ([Fraction(1, 8008)], [[0, 1], [-1, 1], [786, 133, 7]]),
    (1, 3): ([Fraction(1, 720720)], [[0, 1], [-1, 1], [22476, 17828, 3263, 238, 7]]),
}


def closed_form(ell: int, n: int) -> Poly:
    (scale,), factors = RECURRENCE_FORMS[(ell, n)]
    out = Poly.const(scale, ("lam",))
    for f in factors:
        out = out * Poly.from_univariate(f, "lam")
    return out


def check_recurrence_fidelity() -> CheckResult:
    def body():
        vals, ok = {}, True
        for ell in (0, 1):
            led = frobenius_coeffs(ell, None, N=4)
            for n in (2, 3):
                same = not (led.a[n] - closed_form(ell, n))
                vals[f"a{n}(l={ell})"] = same
                ok &= same
        return ok, vals
    return _timed("recurrence-fidelity", "recurrence reproduces the closed-form low-order coefficients", body)


def check_lemma_certificates() -> CheckResult:
    def body():
        vals, ok = {}, True
        specs = lemma_specs()
        for cls in ("0", "1", "ge2"):
            cert = certify_lemma(cls)
            spec = specs[cls]
            rh = [c for c in cert.checks if c.name == "start-ratio-poles-left-half-plane"]
            good = cert.passed and cert.start == spec.start and cert.bound == spec.bound and bool(rh) and rh[0].passed
            if cls == "0":
                good &= rh[0].detail.get("degree") == 10 and rh[0].detail.get("tactic") == "routh-table"
            vals[cls] = {"verdict": cert.verdict, "start": cert.start, "bound": str(cert.bound),
                         "failing": [c.name for c in cert.failing()]}
            ok &= good
        return ok, vals
    return _timed("ratio-bound-lemmas", "exact certificates of the ratio-bound lemmas", body)


# ---------------------------------------------------------------------------
# spectra

SCAN_REGION = (0.0, 4.0, -2.0, 2.0)
EXPECTED_ROOTS = {0: [1.0, 3.0], 1: [0.0, 1.0]}


def check_spectrum_recovery(ells=range(0, 7), tol: float = 1e-6) -> CheckResult:
    def body():
        vals, ok = {}, True
        for ell in ells:
            res = eigenvalue_scan(9, ell, SCAN_REGION)
            roots = [r.lam for r in res.roots if r.lam.real >= -tol]
            expected = EXPECTED_ROOTS.get(ell, [])
            vals[str(ell)] = [[z.real, z.imag] for z in roots]
            match = len(roots) == len(expected) and all(
                abs(z - e) <= tol for z, e in zip(sorted(roots, key=lambda z: z.real), expected))
            ok &= match
        return ok, vals
    return _timed("spectrum-u-star", "unstable spectrum of the nontrivial profile in d = 9", body)


def check_kappa_spectrum(dims=(7, 9), ells=range(0, 7)) -> CheckResult:
    def body():
        vals, ok = {}, True
        for d in dims:
            for ell in ells:
                spec = kappa_spectrum(d, ell, 0.0)
                zeros = kappa_zero_scan(d, ell, 0.0, 6.0)
                expected = {0: [1], 1: [0]}.get(ell, [])
                vals[f"d{d}-l{ell}"] = spec
                ok &= spec == expected and zeros == expected
                ok &= all(connection_coefficient_kappa(d, ell, lam).vanishes for lam in spec)
        return ok, vals
    return _timed("spectrum-kappa", "unstable spectrum of the constant profile", body)


def check_cross_method(ells=(0, 1), lo: Fraction = Fraction(-1, 4), hi: Fraction = Fraction(4),
                       step: Fraction = Fraction(1, 20), N: int = 400) -> CheckResult:
    def body():
        vals, ok = {}, True
        for ell in ells:
            res = eigenvalue_scan(9, ell, (float(lo), float(hi), -0.25, 0.25))
            scan_roots = set()
            for r in res.roots:
                if abs(r.lam.imag) < 1e-8 and float(lo) <= r.lam.real <= float(hi):
                    scan_roots.add(Fraction(r.lam.real).limit_denominator(1000))
            sweep = set()
            lam = lo
            while lam <= hi:
                sweep.add(lam)
                lam += step
            sweep |= scan_roots
            flagged = {x for x in sweep if numeric_ratio_scan(ell, x, N).classification != "tends-to-1"}
            vals[str(ell)] = {"scan": sorted(str(x) for x in scan_roots), "classifier": sorted(str(x) for x in flagged)}
            ok &= flagged == scan_roots
        return ok, vals
    return _timed("cross-method", "scan roots agree with the ratio classifier on a real sweep", body)


# ---------------------------------------------------------------------------
# resolvent and witnesses

def check_witnesses() -> CheckResult:
    def body():
        rep = multiplicity_witnesses()
        ok = (0 < rep.C < 4e-8 and abs(rep.constant - 864) <= 1 and abs(rep.log_slope + 3456) <= 5
              and rep.verdict == "pass")
        return ok, rep.to_json()
    return _timed("multiplicity-witnesses", "algebraic simplicity witnesses", body)


RESOLVENT_FORCINGS = {
    "one": lambda r: np.ones_like(r),
    "poly:1,0,2": lambda r: 1 + 2 * r ** 2,
    "gaussian": lambda r: np.exp(-r ** 2),
}


def check_resolvent(ells=(0, 1, 2), d: int = 9) -> CheckResult:
    def body():
        vals, ok = {}, True
        grid = np.linspace(0.05, 0.999, 60)
        for ell in ells:
            fs = hypergeo_fundamental(ell, d)
            W = fs.scaled_wronskian(grid)
            wdrift = float(np.max(np.abs(W - fs.wronskian_constant)) / abs(fs.wronskian_constant))
            vals[f"l{ell}-wronskian-drift"] = wdrift
            ok &= wdrift <= 1e-10
            for name, g in RESOLVENT_FORCINGS.items():
                mode = solve_resolvent_mode(lambda r, g=g: r ** ell * g(r), ell, d)
                vals[f"l{ell}-{name}"] = mode.residual
                ok &= mode.residual <= 1e-8
        return ok, vals
    return _timed("resolvent-density", "per-mode resolvent solves at the density point", body)


# ---------------------------------------------------------------------------
# dissipativity

GAP_CASES = ((9, 5), (7, 3))


def check_dissipativity(count: int = 500, degree: int = 6, seed: int = 42, cases=GAP_CASES) -> CheckResult:
    def body():
        vals, ok = {}, True
        for d, k in cases:
            rep = check_corpus(corpus(d, count, degree, seed), k)
            vals[f"d{d}-k{k}"] = rep.to_json()
            ok &= not rep.failures and rep.max_gap <= 0
        return ok, vals
    return _timed("dissipativity", "exact dissipativity gap on random polynomial fields", body)


# ---------------------------------------------------------------------------
# evolution

def seeded_state(family: str, mode: str, grid: ev.Discretization, d: int = 9, eps: float = 1e-6) -> ev.RadialStatePair:
    s1, s2 = ev.static_pair(family, d, grid.rho)
    m1, m2 = ev.mode_basis(family, grid.rho)[mode]
    return ev.RadialStatePair(0.0, grid.rho, s1 + eps * m1, s2 + eps * m2, d, family)


def check_linear_growth(N: int = 512, kind: str = "fd") -> CheckResult:
    def body():
        grid = ev.make_grid(N, 9, kind)
        vals, ok = {}, True
        for family, mode, rate, tol in (("u-star", "h", 3.0, 0.2), ("kappa", "g", 1.0, 0.1)):
            tr = ev.evolve(seeded_state(family, mode, grid), grid, 2.0, record_every=0.05)
            fit = ev.fit_rate(tr.taus, np.abs(tr.amplitudes[mode]), (0.0, 2.0))
            vals[f"{family}-{mode}"] = fit.exponent
            ok &= abs(fit.exponent - rate) <= tol
        return ok, vals
    return _timed("linear-growth", "seed modes grow at their eigenvalue rates", body)


def _bump(scale: float):
    return lambda r: scale * (1 - r * r) ** 2


def check_stability(n: int = 32, kind: str = "chebyshev", d: int = 9) -> CheckResult:
    def body():
        grid = ev.make_grid(n, d, kind)
        vals: dict = {}
        # constant profile: tune T only
        k = ev.tune("kappa", d, grid, _bump(1e-3), None)
        tr = k.trajectory
        ok_k = k.verdict == "pass" and tr is not None
        if ok_k:
            t, dist = np.array(tr.taus), np.array(tr.distance)
            tail = dist[t >= 2.0]
            monotone = bool(np.all(np.diff(tail) <= 0))
            ratio = float(dist[-1] / dist.max())
            ok_k = monotone and ratio < 0.1 and t[-1] >= 10.0 - 1e-9
            vals["kappa"] = {**k.to_json(), "monotone-after-2": monotone, "end-over-peak": ratio,
                             "min-psi1": float(min(tr.min_psi1))}
        else:
            vals["kappa"] = k.to_json()
        # nontrivial profile: tune (T, alpha)
        u = ev.tune("u-star", d, grid, _bump(1e-4), None)
        tr = u.trajectory
        ok_u = u.verdict == "pass" and tr is not None
        if ok_u:
            dist = np.array(tr.distance)
            bounded = bool(np.all(dist <= 2 * dist[0]))
            st = ev.upsilon_data("u-star", d, grid, _bump(1e-4), None, u.params.T, u.params.alpha + 1e-5)
            det = ev.evolve(st, grid, 8.0, record_every=0.05)
            growth = ev.fit_rate(det.taus, np.abs(det.amplitudes["h"]), (1.0, 4.0)).exponent
            ok_u = bounded and abs(growth - 3) <= 0.3
            vals["u-star"] = {**u.to_json(), "bounded-by-twice-initial": bounded,
                              "max-over-initial": float(dist.max() / dist[0]), "detuned-growth": growth,
                              "min-psi1": float(min(tr.min_psi1))}
        else:
            vals["u-star"] = u.to_json()
        positive = all(v.get("min-psi1", 0.0) > 0 for v in vals.values())
        return ok_k and ok_u and positive, vals
    return _timed("tuned-stability", "tuned perturbations converge and stay positive", body)


# ---------------------------------------------------------------------------
# registry

CRITERIA: dict[int, Callable[[], CheckResult]] = {
    1: check_profile_exactness,
    2: check_potential_identity,
    3: check_recurrence_fidelity,
    4: check_lemma_certificates,
    5: check_spectrum_recovery,
    6: check_kappa_spectrum,
    7: check_witnesses,
    8: check_resolvent,
    9: check_dissipativity,
    10: check_linear_growth,
    11: check_stability,
    12: check_cross_method,
}

SUITES: dict[str, list[Callable[[], CheckResult]]] = {
    "quick": [
        check_profile_exactness,
        check_potential_identity,
        check_kappa_spectrum,
        lambda: check_dissipativity(count=50),
    ],
    "paper-checks": [CRITERIA[i] for i in sorted(CRITERIA)],
    "stress": [
        lambda: check_dissipativity(count=200, degree=10),
        lambda: check_spectrum_recovery(ells=range(0, 21)),
        lambda: check_linear_growth(N=2048),
    ],
}


def run_suite(name: str) -> list[CheckResult]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return [check() for check in SUITES[name]]


__all__ = [
    "CRITERIA", "CheckResult", "RESOLVENT_FORCINGS", "SUITES", "check_cross_method", "check_dissipativity",
    "check_kappa_spectrum", "check_lemma_certificates", "check_linear_growth", "check_potential_identity",
    "check_profile_exactness", "check_recurrence_fidelity", "check_resolvent", "check_spectrum_recovery",
    "check_stability", "check_witnesses", "closed_form", "cone_points", "run_suite", "seeded_state",
]
