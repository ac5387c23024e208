"""Frobenius recurrences for the radial spectral equation and their ratio certificates.

Two series forms are used.  The low form expands ``f = rho^l (7/5 + rho^2)^-3 y(rho^2)``
and serves l in {0, 1}.  The high form uses the variable ``x = 12 rho^2/(5 rho^2 + 7)``
and serves l >= 2.  Both give three-term recurrences
``a_{n+2} = A_n a_{n+1} + B_n a_n`` whose ratio ``r_n = a_{n+1}/a_n`` tends either to 1
(radius one, no eigenvalue) or to the other characteristic root.
"""

from __future__ import annotations

import cmath
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .exact import (
    CertificateReport,
    Poly,
    certify_nonneg,
    modulus_square_split,
    poly_vars,
    routh_first_column,
    routh_hurwitz,
    sturm_count,
    u_divmod,
    u_eval,
    u_gcd,
    u_monic,
)
from .ratfunc import RatFunc

LOW, HIGH = "low", "high"

# characteristic equations t^2 - A_inf t - B_inf = 0
LIMITS = {LOW: (Fraction(2, 7), Fraction(5, 7)), HIGH: (Fraction(17, 12), Fraction(-5, 12))}
ROOTS = {LOW: (Fraction(1), Fraction(-5, 7)), HIGH: (Fraction(1), Fraction(5, 12))}


# ---------------------------------------------------------------------------
# recurrence and quasi-solution formulas, generic in the number type

def _low_parts(l, n, lam):
    a = 7 * lam * (lam + 9) + 7 * l * l + l * (8 * n + 14 * lam + 103) + 8 * n * n + 4 * (7 * lam + 34) * n - 40
    b = 5 * (lam + l + 2 * n - 4) * (lam + l + 2 * n - 3)
    den = 14 * (n + 2) * (2 * l + 2 * n + 11)
    return a, b, den


def _high_parts(l, n, lam):
    a = (68 * n * n + (48 * lam + 68 * l + 356) * n + 7 * lam * lam + 17 * l * l
         + 24 * lam * l + 128 * lam + 178 * l - 15)
    b = -5 * (2 * n + lam + l + 11) * (2 * n + lam + l - 3)
    den = 24 * (n + 2) * (2 * n + 2 * l + 11)
    return a, b, den


def _quasi_parts(form: str, l, n, lam):
    """(numerator, denominator) of the quasi-solution r~_n (low form) or R_n (high form)."""
    if form == HIGH:
        num = (14 * lam * lam + 16 * lam * (6 * n + 3 * l + 10) + 17 * l * (2 * n + 2 * l + 9)
               + 48 * (n - 1) * (2 * n + 2 * l + 9))
        return num, 48 * (n + 1) * (2 * n + 2 * l + 9)
    if l == 0:
        return lam * lam + (4 * n + 9) * lam + 4 * (n + 1) ** 2, 2 * (2 * n + 9) * (n + 1)
    if l == 1:
        num = (n + 4) * (lam * lam + (4 * n + 11) * lam) + 2 * (n + 1) ** 2 * (2 * n + 11)
        return num, 2 * (2 * n + 11) * (n + 1) * (n + 4)
    raise ValueError("low-form quasi-solutions exist only for l in {0, 1}")


def _parts(form: str):
    return _high_parts if form == HIGH else _low_parts


def default_form(ell: int) -> str:
    return LOW if ell in (0, 1) else HIGH


def recurrence_coeffs(form: str, ell, n, lam):
    """(A_n, B_n) as numbers, or as :class:`RatFunc` when any argument is a :class:`Poly`."""
    if isinstance(n, int) and n < -1:
        raise IndexError("recurrence index must be >= -1")
    a, b, den = _parts(form)(ell, n, lam)
    if any(isinstance(v, Poly) for v in (a, b, den)):
        vars_ = next(v.vars for v in (a, b, den) if isinstance(v, Poly))
        return RatFunc.of(a, vars_) / den, RatFunc.of(b, vars_) / den
    if isinstance(den, int):
        return Fraction(a) / den if not isinstance(a, (float, complex)) else a / den, \
            Fraction(b) / den if not isinstance(b, (float, complex)) else b / den
    return a / den, b / den


def quasi_solution(ell: int, n, lam, form: str | None = None):
    """Quasi-solution of the ratio recurrence; tends to 1 as n grows."""
    if isinstance(n, int) and n < 0:
        raise IndexError("quasi-solution index must be >= 0")
    form = form or default_form(ell)
    num, den = _quasi_parts(form, ell, n, lam)
    if isinstance(num, Poly) or isinstance(den, Poly):
        vars_ = num.vars if isinstance(num, Poly) else den.vars
        return RatFunc.of(num, vars_) / den
    if isinstance(num, int) and isinstance(den, int):
        return Fraction(num, den)
    return num / den


# ---------------------------------------------------------------------------
# coefficient ledgers

@dataclass
class CoefficientLedger:
    """Frobenius coefficients and derived ratio data for one (l, lambda)."""

    mode: str
    ell: int
    form: str
    lam: Any
    a: list
    r: list = field(default_factory=list)
    quasi: list = field(default_factory=list)
    delta: list = field(default_factory=list)
    eps: list = field(default_factory=list)
    C: list = field(default_factory=list)
    removed_factor: list | None = None


def _mode_of(lam) -> str:
    if lam is None or isinstance(lam, Poly):
        return "exact-symbolic"
    if isinstance(lam, (int, Fraction)):
        return "exact-rational"
    return "float-complex"


def frobenius_coeffs(ell: int, lam=None, N: int = 12, form: str | None = None,
                     n_max_exact: int = 5000) -> CoefficientLedger:
    """Coefficients a_0..a_N of the series analytic at the origin.

    ``lam=None`` keeps lambda symbolic (polynomial coefficients in ``lam``).
    """
    if N < 3:
        raise ValueError("need N >= 3")
    form = form or default_form(ell)
    mode = _mode_of(lam)
    if mode != "float-complex" and N > n_max_exact:
        raise MemoryError(f"exact ledger limited to N <= {n_max_exact}")
    if mode == "exact-symbolic":
        lam = Poly.var("lam")
    elif mode == "exact-rational":
        lam = Fraction(lam)
    else:
        lam = complex(lam)
    parts = _parts(form)
    a = [None] * (N + 1)
    prev = 0
    a[0] = Poly.const(1, ("lam",)) if mode == "exact-symbolic" else (Fraction(1) if mode == "exact-rational" else 1 + 0j)
    # a_{n+2} = A_n a_{n+1} + B_n a_n, started from a_{-1} = 0
    for n in range(-1, N - 1):
        an, bn, den = parts(ell, n, lam)
        cur = a[n + 1]
        nxt = cur * an + (prev * bn if n >= 0 else 0)
        a[n + 2] = nxt / den if mode != "exact-symbolic" else nxt * Fraction(1, den)
        prev = cur
    led = CoefficientLedger(mode=mode, ell=ell, form=form, lam=lam if mode != "exact-symbolic" else None, a=a)
    if mode == "exact-symbolic":
        if form == LOW and ell in (0, 1):
            led.removed_factor = u_gcd(a[2].univariate("lam"), a[3].univariate("lam"))
        return led
    for n in range(N):
        led.r.append(a[n + 1] / a[n] if a[n] != 0 else None)
    if form == HIGH or ell in (0, 1):
        for n in range(N + 1):
            led.quasi.append(quasi_solution(ell, n, lam, form))
        for n in range(N):
            rn, qn = led.r[n], led.quasi[n]
            led.delta.append(rn / qn - 1 if rn is not None and qn != 0 else None)
            an, bn = recurrence_coeffs(form, ell, n, lam)
            q1 = led.quasi[n + 1]
            led.eps.append((an * qn + bn) / (qn * q1) - 1)
            led.C.append(bn / (qn * q1))
    return led


# ---------------------------------------------------------------------------
# symbolic epsilon / C and the delta recursion

@dataclass
class DefectTerms:
    """epsilon_n and C_n as polynomial quotients in (n, [l,] lam)."""

    form: str
    ell: int | None
    eps: RatFunc
    C: RatFunc
    recursion_residual: RatFunc

    def recursion_holds(self) -> bool:
        return self.recursion_residual.is_zero()


def ratio_defect_terms(ell: int | None, form: str | None = None) -> DefectTerms:
    """Exact epsilon_n and C_n from the recurrence and the quasi-solution.

    ``ell=None`` (high form) keeps l symbolic.  The residual of the identity
    ``delta_{n+1} = eps_n - C_n delta_n/(1 + delta_n)`` is returned alongside.
    """
    form = form or (HIGH if ell is None else default_form(ell))
    if form == HIGH:
        n, l, lam = poly_vars("n", "l", "lam")
        lv = l if ell is None else ell
    else:
        n, lam = poly_vars("n", "lam")
        lv = ell
    a, b, alpha = _parts(form)(lv, n, lam)
    p0, q0 = _quasi_parts(form, lv, n, lam)
    p1, q1 = _quasi_parts(form, lv, n + 1, lam)
    den = alpha * p0 * p1
    eps = RatFunc((a * p0 + b * q0) * q1 - alpha * p0 * p1, den)
    C = RatFunc(b * q0 * q1, den)
    # symbolic check of the delta recursion with delta_n as a free symbol
    d = Poly.var("delta", n.vars + ("delta",))
    one = Poly.const(1, d.vars)
    rq0 = RatFunc(p0.with_vars(d.vars), q0.with_vars(d.vars) if isinstance(q0, Poly) else q0 * one)
    rq1 = RatFunc(p1.with_vars(d.vars), q1.with_vars(d.vars) if isinstance(q1, Poly) else q1 * one)
    A = RatFunc(a.with_vars(d.vars), alpha.with_vars(d.vars))
    B = RatFunc(b.with_vars(d.vars), alpha.with_vars(d.vars))
    rn = rq0 * RatFunc.of(one + d)
    lhs = (A + B / rn) / rq1 - 1
    epsd = RatFunc(eps.num.with_vars(d.vars), eps.den.with_vars(d.vars))
    Cd = RatFunc(C.num.with_vars(d.vars), C.den.with_vars(d.vars))
    rhs = epsd - Cd * RatFunc(d, one + d)
    resid = lhs - rhs
    return DefectTerms(form, ell, eps, C, RatFunc(resid.num, resid.den))


# ---------------------------------------------------------------------------
# lemma certificates

@dataclass
class LemmaSpec:
    lemma_id: str
    ell_class: str
    start: int
    bound: Fraction
    eps_env: tuple[Poly, Poly]  # envelope p/q as polynomials in n
    C_env: tuple[Poly, Poly]
    description: str


def _env(num, den) -> tuple[Poly, Poly]:
    (n,) = poly_vars("n")
    return (num if isinstance(num, Poly) else Poly.const(num, ("n",))), (den if isinstance(den, Poly) else Poly.const(den, ("n",)))


def lemma_specs() -> dict[str, LemmaSpec]:
    (n,) = poly_vars("n")
    return {
        "0": LemmaSpec(
            "ratio-bound-l0", "0", 6, Fraction(1, 5),
            # 3/140 + 23/(40 n) = (6 n + 161)/(280 n)
            _env(6 * n + 161, 280 * n),
            # 5/7 - 23/(10 n) = (50 n - 161)/(70 n)
            _env(50 * n - 161, 70 * n),
            "|delta_6| <= 1/5, |eps_n| <= 3/140 + 23/(40n), |C_n| <= 5/7 - 23/(10n) for n >= 6",
        ),
        "1": LemmaSpec(
            "ratio-bound-l1", "1", 5, Fraction(1, 5),
            # 3/140 + 5/(8(n+1)) = (6(n+1) + 175)/(280(n+1))
            _env(6 * n + 181, 280 * n + 280),
            # 5/7 - 5/(2(n+1)) = (10(n+1) - 35)/(14(n+1))
            _env(10 * n - 25, 14 * n + 14),
            "|delta_5| <= 1/5, |eps_n| <= 3/140 + 5/(8(n+1)), |C_n| <= 5/7 - 5/(2(n+1)) for n >= 5",
        ),
        "ge2": LemmaSpec(
            "ratio-bound-l-ge2", "ge2", 3, Fraction(1, 3),
            _env(1, 8),
            _env(5, 12),
            "|delta~_3| <= 1/3, |eps~_n| <= 1/8, |C~_n| <= 5/12 for n >= 3, l >= 2",
        ),
    }


@dataclass
class SubCheck:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    report: CertificateReport | None = None

    def to_json(self) -> dict:
        out = {"name": self.name, "verdict": "pass" if self.passed else "fail", **self.detail}
        if self.report is not None:
            out["certificate"] = self.report.to_json()
        return out


@dataclass
class LemmaCertificate:
    lemma_id: str
    ell_class: str
    start: int
    bound: Fraction
    checks: list[SubCheck]
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def failing(self) -> list[SubCheck]:
        return [c for c in self.checks if not c.passed]

    def to_json(self, with_polynomials: bool = True) -> dict:
        checks = []
        for c in self.checks:
            j = c.to_json()
            if not with_polynomials and "certificate" in j:
                j["certificate"] = {k: v for k, v in j["certificate"].items() if k != "polynomial"}
            checks.append(j)
        return {
            "lemma-id": self.lemma_id,
            "ell-class": self.ell_class,
            "bounds": {"start-index": self.start, "delta-bound": str(self.bound)},
            "verdict": self.verdict,
            "elapsed-s": round(self.elapsed, 3),
            "checks": checks,
        }


def _univariate_ratio_start(ell: int, start: int) -> RatFunc:
    """r_start(l, lam) for l in {0, 1}, with the polynomial-solution factor cancelled."""
    led = frobenius_coeffs(ell, None, 4)
    a2, a3 = led.a[2].univariate("lam"), led.a[3].univariate("lam")
    g = led.removed_factor
    num = Poly.from_univariate(u_divmod(a3, g)[0], "lam")
    den = Poly.from_univariate(u_divmod(a2, g)[0], "lam")
    r = RatFunc(num, den).reduced()
    (lam,) = poly_vars("lam")
    for k in range(2, start):
        A, B = recurrence_coeffs(LOW, ell, k, lam)
        r = (A + B / r).reduced()
    return r


def _high_ratio_start(start: int) -> tuple[Poly, Poly, list[Poly]]:
    """(N, D, factors of D) with r^_start = N/D symbolic in (l, lam)."""
    l, lam = poly_vars("l", "lam")
    a, b, alpha = _high_parts(l, -1, lam)
    N, D = a, alpha            # r^_0 = A~_{-1}
    factors = [alpha]
    for k in range(0, start):
        a, b, alpha = _high_parts(l, k, lam)
        N, D, factors = a * N + b * D, alpha * N, [alpha, N]
    return N, D, factors


def _bound_poly(num: Poly, den: Poly, bp: Poly | Fraction, bq: Poly | Fraction) -> Poly:
    """Polynomial whose nonnegativity on the imaginary axis encodes |num/den| <= bp/bq."""
    Qn = modulus_square_split(num)
    Qd = modulus_square_split(den)
    return Qd * (bp * bp) - Qn * (bq * bq)


def _certify_with_sections(G: Poly, n0: int, extra_shift: dict | None = None,
                           max_tail: int = 200) -> tuple[CertificateReport, dict]:
    """Coefficient tactic at n -> n + n0; otherwise sections n0..N1-1 plus a shifted tail."""
    shifts = {"n": n0, **(extra_shift or {})}
    rep = certify_nonneg(G, shifts)
    if rep.passed:
        return rep, {"tactic-chain": ["coefficient-nonnegativity"]}
    for n1 in range(n0 + 1, n0 + max_tail):
        tail = certify_nonneg(G, {**shifts, "n": n1})
        if tail.passed:
            break
    else:
        return rep, {"tactic-chain": ["coefficient-nonnegativity", "tail-search-exhausted"]}
    sections = []
    for m in range(n0, n1):
        sec = G.partial(n=m)
        r = certify_nonneg(sec, extra_shift or {})
        sections.append((m, r.tactic, r.verdict))
        if not r.passed:
            r.tactic = f"section n={m}: {r.tactic}"
            return r, {"tactic-chain": ["sections", "coefficient-tail"], "sections": sections}
    tail.tactic = f"sturm/coefficient sections n={n0}..{n1 - 1} + coefficient tail from n={n1}"
    return tail, {"tactic-chain": ["sections", "coefficient-tail"], "tail-start": n1,
                  "sections": [list(s) for s in sections]}


def _positive_for_params(p: Poly, lows: dict[str, int]) -> tuple[bool, str]:
    """Certify p > 0 whenever each listed parameter is >= its lower bound."""
    q = p
    for v, lo in lows.items():
        q = q.shift(v, lo)
    if not q.negative_terms() and q.constant_term() > 0:
        return True, "positive-coefficients"
    used = q.used_vars()
    if len(used) <= 1:
        coeffs = q.univariate(used[0]) if used else [q.constant_term()]
        if sturm_count(coeffs, 0) == 0 and coeffs[0] > 0:
            return True, "sturm-on-halfline"
    return False, "undecided"


def parametric_hurwitz(p: Poly, var: str = "lam", param: str | None = None, lo: int = 0) -> tuple[bool, dict]:
    """Hurwitz stability in ``var`` for every real parameter value >= lo.

    The Routh array is computed over rational functions of the parameter and each
    first-column entry is certified positive on [lo, oo).
    """
    if param is None or param not in p.used_vars():
        coeffs = p.univariate(var)
        return routh_hurwitz(coeffs), {"degree": len(coeffs) - 1, "tactic": "routh-table"}
    coeffs = p.coefficients_in(var)  # polynomials in param, low to high degree
    lead = coeffs[-1]
    sgn_ok, _ = _positive_for_params(lead, {param: lo})
    if not sgn_ok:
        coeffs = [-c for c in coeffs]
    desc = [RatFunc.of(c.with_vars((param,))) for c in reversed(coeffs)]
    col = routh_first_column(desc)
    if col is None or len(col) != len(desc):
        return False, {"degree": len(desc) - 1, "tactic": "parametric-routh", "reason": "vanishing pivot"}
    failures = []
    for i, entry in enumerate(col):
        ok, how = _positive_for_params(entry.num * entry.den, {param: lo})
        if not ok:
            failures.append(i)
    return not failures, {"degree": len(desc) - 1, "tactic": "parametric-routh",
                          "parameter": param, "from": lo, "failed-rows": failures}


def _quadratic_lhp(p: Poly, lows: dict[str, int]) -> tuple[bool, dict]:
    """A quadratic (or lower) in lam has left-half-plane zeros iff all coefficients share a sign."""
    coeffs = p.coefficients_in("lam")
    verdicts = [_positive_for_params(c, lows) for c in coeffs]
    return all(v for v, _ in verdicts) and len(coeffs) <= 3, {
        "degree": len(coeffs) - 1, "tactic": "positive-coefficients-quadratic",
        "coefficient-tactics": [t for _, t in verdicts]}


def certify_lemma(ell_class: str | int) -> LemmaCertificate:
    """Run the full certificate chain for one l-class ('0', '1' or 'ge2')."""
    ell_class = str(ell_class)
    if ell_class not in ("0", "1", "ge2"):
        raise ValueError("l-class must be 0, 1 or ge2")
    spec = lemma_specs()[ell_class]
    t0 = time.perf_counter()
    checks: list[SubCheck] = []
    b = spec.bound
    n0 = spec.start
    if ell_class in ("0", "1"):
        ell = int(ell_class)
        # start ratio and delta at the start index
        r = _univariate_ratio_start(ell, n0)
        (lam,) = poly_vars("lam")
        qs = quasi_solution(ell, n0, lam).reduced()
        delta = (r / qs - 1).reduced()
        den_r = r.den.univariate("lam")
        rh = routh_hurwitz(den_r)
        checks.append(SubCheck("start-ratio-poles-left-half-plane", rh,
                               {"degree": len(den_r) - 1, "tactic": "routh-table"}))
        (nn, lam2) = poly_vars("n", "lam")
        pq, _ = _quasi_parts(LOW, ell, nn, lam2)
        ok, info = _quadratic_lhp(pq, {"n": 0})
        checks.append(SubCheck("quasi-solution-zeros-left-half-plane", ok, info))
        ok_all = routh_hurwitz(delta.den.univariate("lam"))
        checks.append(SubCheck("start-delta-poles-left-half-plane", ok_all,
                               {"degree": delta.den.degree("lam"), "tactic": "routh-table"}))
        G = _bound_poly(delta.num, delta.den, b.numerator, b.denominator)
        rep = certify_nonneg(G)
        checks.append(SubCheck(f"start-bound |delta_{n0}| <= {b}", rep.passed, {}, rep))
        dn, dd = delta.degree("lam")
        checks.append(SubCheck("start-degree-bounded", dn <= dd, {"num-degree": dn, "den-degree": dd}))
        terms = ratio_defect_terms(ell)
        checks.append(SubCheck("delta-recursion-identity", terms.recursion_holds(), {}))
    else:
        N, D, factors = _high_ratio_start(n0)
        l, lam = poly_vars("l", "lam")
        pR, qR = _quasi_parts(HIGH, l, n0, lam)
        # delta~ = N qR / (D pR) - 1
        dnum = N * qR - D * pR
        dden = D * pR
        pole_factor = factors[-1]
        ok, info = parametric_hurwitz(pole_factor, "lam", "l", 2)
        checks.append(SubCheck("start-ratio-poles-left-half-plane", ok, info))
        (nn, ll, lam3) = poly_vars("n", "l", "lam")
        pq, _ = _quasi_parts(HIGH, ll, nn, lam3)
        ok, info = _quadratic_lhp(pq, {"n": n0, "l": 2})
        checks.append(SubCheck("quasi-solution-zeros-left-half-plane", ok, info))
        G = _bound_poly(dnum, dden, b.numerator, b.denominator)
        rep = certify_nonneg(G, {"l": 2})
        detail = {}
        if not rep.passed:
            rep, detail = _per_l_fallback(G, rep)
        checks.append(SubCheck(f"start-bound |delta_{n0}| <= {b}", rep.passed, detail, rep))
        dn, dd = dnum.degree("lam"), dden.degree("lam")
        checks.append(SubCheck("start-degree-bounded", dn <= dd, {"num-degree": dn, "den-degree": dd}))
        terms = ratio_defect_terms(None)
        checks.append(SubCheck("delta-recursion-identity", terms.recursion_holds(), {}))

    extra = {} if ell_class != "ge2" else {"l": 2}
    for label, rf, env in (("eps", terms.eps, spec.eps_env), ("C", terms.C, spec.C_env)):
        p_env, q_env = env
        ok_env, _ = _positive_for_params(p_env * q_env, {"n": n0}) if p_env.used_vars() or q_env.used_vars() \
            else (p_env.constant_term() * q_env.constant_term() > 0, "")
        checks.append(SubCheck(f"{label}-envelope-positive", ok_env, {}))
        G = _bound_poly(rf.num, rf.den, p_env, q_env)
        rep, detail = _certify_with_sections(G, n0, extra)
        checks.append(SubCheck(f"{label}-envelope-bound", rep.passed, detail, rep))
        dn, dd = rf.degree("lam")
        checks.append(SubCheck(f"{label}-degree-bounded", dn <= dd, {"num-degree": dn, "den-degree": dd}))

    # induction: b - e(n) - b/(1-b) c(n) >= 0 for n >= n0
    (pe, qe), (pc, qc) = spec.eps_env, spec.C_env
    k = b / (1 - b)
    H = qe * qc * b - pe * qc - pc * qe * k
    if H.used_vars():
        rep = certify_nonneg(H, {"n": n0})
    else:
        rep = CertificateReport("pass" if H.constant_term() >= 0 else "fail", "constant", {}, H)
    checks.append(SubCheck("induction-closes", rep.passed, {"closure": "b - e(n) - b c(n)/(1-b) >= 0"}, rep))
    return LemmaCertificate(spec.lemma_id, ell_class, n0, b, checks, time.perf_counter() - t0)


def _per_l_fallback(G: Poly, failed: CertificateReport, l_max: int = 20) -> tuple[CertificateReport, dict]:
    sections = []
    for lv in range(2, l_max + 1):
        r = certify_nonneg(G.partial(l=lv))
        sections.append((lv, r.verdict))
    ok = all(v == "pass" for _, v in sections)
    rep = CertificateReport("partial" if ok else "fail", f"per-l sections 2..{l_max}", failed.shift,
                            failed.polynomial, offending=failed.offending)
    return rep, {"sections": sections}


# ---------------------------------------------------------------------------
# Poincare-ratio classification

@dataclass
class RatioClassification:
    ell: int
    lam: Any
    N: int
    ratio: complex | None
    accelerated: complex | None
    classification: str
    terminated_at: int | None = None


def numeric_ratio_scan(ell: int, lam, N: int = 500, form: str | None = None) -> RatioClassification:
    """Iterate the recurrence to N and classify the limiting coefficient ratio.

    Rational ``lam`` runs in exact arithmetic, so terminating (polynomial)
    solutions are detected without rounding.  Classes: tends-to-1,
    tends-to-other-root, terminates, inconclusive.
    """
    if N < 10:
        raise ValueError("need N >= 10")
    form = form or default_form(ell)
    exact = isinstance(lam, (int, Fraction))
    lam = Fraction(lam) if exact else complex(lam)
    parts = _parts(form)
    prev, cur = (Fraction(0), Fraction(1)) if exact else (0j, 1 + 0j)
    ratios: list[complex] = []
    for n in range(-1, N - 1):
        an, bn, den = parts(ell, n, lam)
        nxt = (cur * an + prev * bn) / den
        if nxt == 0 and cur == 0:
            return RatioClassification(ell, lam, N, None, None, "terminates", terminated_at=n + 1)
        if cur != 0:
            ratios.append(complex(nxt / cur) if exact else nxt / cur)
        prev, cur = cur, nxt
        if not exact:
            scale = max(abs(prev), abs(cur))
            if scale > 1e100 or (0 < scale < 1e-100):
                prev, cur = prev / scale, cur / scale
    if cur == 0:
        return RatioClassification(ell, lam, N, None, None, "terminates", terminated_at=N)
    r = ratios[-1]
    acc = _aitken(ratios[-3:]) if len(ratios) >= 3 else r
    one, other = ROOTS[form]
    d1, d2 = abs(acc - float(one)), abs(acc - float(other))
    if max(d1, d2) == 0 or abs(d1 - d2) < 0.25 * abs(float(one - other)):
        label = "inconclusive"
    else:
        label = "tends-to-1" if d1 < d2 else "tends-to-other-root"
    return RatioClassification(ell, lam, N, r, acc, label)


def _aitken(seq):
    x0, x1, x2 = seq
    d2 = x2 - 2 * x1 + x0
    if d2 == 0 or not cmath.isfinite(d2):
        return x2
    return x2 - (x2 - x1) ** 2 / d2


def characteristic_roots(form: str) -> tuple[Fraction, Fraction]:
    return ROOTS[form]


__all__ = [
    "CoefficientLedger", "DefectTerms", "LemmaCertificate", "RatioClassification",
    "certify_lemma", "characteristic_roots", "frobenius_coeffs", "numeric_ratio_scan",
    "parametric_hurwitz", "quasi_solution", "ratio_defect_terms", "recurrence_coeffs",
    "u_eval", "u_monic",
]
