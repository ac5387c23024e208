"""Connection-problem solver for the radial spectral ODE and the constant-profile spectrum.

With ``x = rho^2`` the radial eigenvalue equation

    (1 - rho^2) f'' + ((d-1)/rho - 2(lam+3) rho) f' - ((lam+2)(lam+3) + l(l+d-2)/rho^2 - V) f = 0

becomes ``A(x) x^2 y'' + B(x) x y' + C(x) y = 0`` with polynomial coefficients once
multiplied by ``x P(x)``, where ``V = Vnum/P``.  Frobenius series analytic at
``x = 0`` and at ``x = 1`` are matched through their Wronskian at ``x = 1/2``;
it vanishes exactly at eigenvalues.  Everything is vectorized over arrays of lambda.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from numpy.polynomial import polynomial as npoly

from .profiles import profile_constants

X_MATCH = 0.5
POTENTIALS = ("u-star", "kappa", "free")


class PrecisionError(RuntimeError):
    """Series truncation not converged at the matching point."""


# ---------------------------------------------------------------------------
# the ODE

@dataclass(frozen=True)
class SpectralPoint:
    d: int
    ell: int
    lam: complex
    potential: str = "u-star"

    @property
    def exploratory(self) -> bool:
        return self.potential == "u-star" and self.d != 9


@dataclass(frozen=True)
class _Problem:
    d: int
    ell: int
    potential: str
    weight: np.ndarray     # P(x), low to high
    vnum: np.ndarray       # V = vnum / P
    radius0: float         # distance from 0 to the nearest other singularity


def _problem(d: int, ell: int, potential: str) -> _Problem:
    if potential not in POTENTIALS:
        raise ValueError(f"potential must be one of {POTENTIALS}")
    if ell < 0 or d < 3:
        raise ValueError("need l >= 0 and d >= 3")
    if potential == "u-star":
        c = profile_constants(d)
        c1, c2, c3 = float(c.c1), float(c.c2), float(c.c3)
        weight = np.array([c3 * c3, 2 * c3, 1.0])
        vnum = np.array([2 * c1, -2 * c2])
        return _Problem(d, ell, potential, weight, vnum, min(1.0, c3))
    v = 12.0 if potential == "kappa" else 0.0
    return _Problem(d, ell, potential, np.array([1.0]), np.array([v]), 1.0)


def _coeffs_at_zero(pr: _Problem, lam: np.ndarray):
    """Coefficient polynomials (A, B, C) in x; C depends on lambda (shape (deg+1, n))."""
    d, ell = pr.d, pr.ell
    P = pr.weight
    A = npoly.polymul([4.0, -4.0], P)
    B = npoly.polymul(P, [2.0 * d, 0.0])  # lambda-dependent part added below
    Bl = npoly.polymul(P, [0.0, 1.0])     # times -(4 lam + 14)
    xV = npoly.polymul([0.0, 1.0], pr.vnum)
    C0 = npoly.polyadd(-ell * (ell + d - 2) * P, xV)
    Cl = npoly.polymul(P, [0.0, 1.0])     # times -(lam+2)(lam+3)
    lam = np.asarray(lam, dtype=complex)
    nb = max(len(B), len(Bl))
    Bm = np.zeros((nb, lam.size), complex)
    Bm[: len(B)] += B[:, None]
    Bm[: len(Bl)] += -Bl[:, None] * (4 * lam + 14)[None, :]
    nc = max(len(C0), len(Cl))
    Cm = np.zeros((nc, lam.size), complex)
    Cm[: len(C0)] += C0[:, None]
    Cm[: len(Cl)] += -Cl[:, None] * ((lam + 2) * (lam + 3))[None, :]
    Am = np.repeat(A[:, None].astype(complex), lam.size, axis=1)
    return Am, Bm, Cm


def _compose_one_minus(p: np.ndarray) -> np.ndarray:
    """Coefficients of q(w) = p(1 - w); p has shape (deg+1, n)."""
    deg = p.shape[0] - 1
    out = np.zeros_like(p)
    for k in range(deg + 1):
        # (1 - w)^k = sum_j C(k, j) (-w)^j
        for j in range(k + 1):
            out[j] += p[k] * math.comb(k, j) * (-1) ** j
    return out


def _coeffs_at_one(pr: _Problem, lam: np.ndarray):
    """Coefficients in w = 1 - x for the equation multiplied by w (so A~ w^2 y'' + B~ w y' + C~ y = 0)."""
    A, B, C = _coeffs_at_zero(pr, lam)
    # x^2 P(x)*4 (1 - x) y'' -> divide the (1 - x) factor out: A~ = 4 x^2 P(x)
    n = lam.size
    x2P = npoly.polymul([0.0, 0.0, 1.0], pr.weight) * 4
    At = _compose_one_minus(np.repeat(x2P[:, None].astype(complex), n, axis=1))
    # x B(x) y_x -> -x B(x) y_w, multiplied by w gives B~ w y_w with B~ = -x B(x)
    xB = np.vstack([np.zeros((1, n), complex), B])
    Bt = -_compose_one_minus(xB)
    # C y multiplied by w
    Ct = np.vstack([np.zeros((1, n), complex), _compose_one_minus(C)])
    return At, Bt, Ct


def _series(A, B, C, s, N: int, resonance: tuple[np.ndarray, int] | None = None):
    """Frobenius coefficients for A w^2 y'' + B w y' + C y = 0 at exponent s.

    ``resonance=(m, M)`` rescales so that no division by (k - m) occurs for k <= M.
    """
    n = A.shape[1]
    deg = max(A.shape[0], B.shape[0], C.shape[0])

    def row(M, j):
        return M[j] if j < M.shape[0] else np.zeros(n, complex)

    coeffs = np.zeros((N + 1, n), complex)
    coeffs[0] = 1.0
    m, Mres = resonance if resonance is not None else (None, 0)

    def prodfac(lo, hi):
        out = np.ones(n, complex)
        for i in range(lo, hi + 1):
            out = out * (i - m)
        return out

    # while k <= M the entries hold gamma_k with b_k = gamma_k * prod_{i=k+1}^{M} (i - m)
    for k in range(1, N + 1):
        acc = np.zeros(n, complex)
        for j in range(1, min(k, deg - 1) + 1):
            e = k - j + s
            fac = row(A, j) * e * (e - 1) + row(B, j) * e + row(C, j)
            prev = coeffs[k - j]
            if resonance is not None and k <= Mres:
                prev = prev * prodfac(k - j + 1, k - 1)
            acc = acc + fac * prev
        e = k + s
        if resonance is not None and k <= Mres:
            # indicial polynomial A0 k (k - m) with the (k - m) factor absorbed
            coeffs[k] = -acc / (row(A, 0) * k)
        else:
            ind = row(A, 0) * e * (e - 1) + row(B, 0) * e + row(C, 0)
            coeffs[k] = -acc / ind
        if resonance is not None and k == Mres:
            # from here on store b_k = gamma_k * prod_{i=k+1}^{M} (i - m)
            for i in range(Mres + 1):
                coeffs[i] = coeffs[i] * prodfac(i + 1, Mres)
    return coeffs


def _eval_series(coeffs: np.ndarray, s: float, w: float):
    """(value, derivative) of w^s sum c_k w^k, and the tail estimate."""
    N = coeffs.shape[0] - 1
    k = np.arange(N + 1)[:, None]
    pw = w ** k
    base = (coeffs * pw).sum(axis=0)
    dbase = (coeffs[1:] * k[1:] * w ** (k[1:] - 1)).sum(axis=0)
    val = w ** s * base
    der = s * w ** (s - 1) * base + w ** s * dbase if s != 0 else dbase
    tail = np.abs(coeffs[-3:] * pw[-3:]).max(axis=0) / np.maximum(np.abs(base), 1e-300)
    return val, der, tail


def _truncation(ratio: float, tol: float = 1e-18) -> int:
    return int(math.ceil(math.log(tol) / math.log(ratio))) + 30


def _resonance_order(d: int) -> int:
    """Largest integer second exponent (d-5)/2 - lam reachable with Re lam > -1/2."""
    return int(math.floor((d - 5) / 2 + 0.4))


@dataclass
class IndicatorValues:
    lam: np.ndarray
    value: np.ndarray        # Wronskian at the matching point
    normalized: np.ndarray   # |W| / (|y0 y1'| + |y0' y1|)
    tail: np.ndarray


def connection_indicator_array(d: int, ell: int, lam, potential: str = "u-star",
                               N0: int | None = None, N1: int | None = None) -> IndicatorValues:
    pr = _problem(d, ell, potential)
    lam = np.atleast_1d(np.asarray(lam, dtype=complex))
    N0 = N0 or _truncation(X_MATCH / pr.radius0)
    N1 = N1 or _truncation(1 - X_MATCH)
    A, B, C = _coeffs_at_zero(pr, lam)
    s0 = ell / 2
    c0 = _series(A, B, C, s0, N0)
    y0, dy0, t0 = _eval_series(c0, s0, X_MATCH)
    At, Bt, Ct = _coeffs_at_one(pr, lam)
    m = (d - 5) / 2 - lam
    Mres = _resonance_order(d)
    c1 = _series(At, Bt, Ct, 0.0, N1, resonance=(m, Mres))
    y1, dy1w, t1 = _eval_series(c1, 0.0, 1 - X_MATCH)
    dy1 = -dy1w
    W = y0 * dy1 - dy0 * y1
    scale = np.abs(y0 * dy1) + np.abs(dy0 * y1)
    return IndicatorValues(lam, W, np.abs(W) / np.maximum(scale, 1e-300), np.maximum(t0, t1))


def connection_indicator(p: SpectralPoint, tol: float = 1e-12) -> complex:
    """Wronskian of the two analytic Frobenius branches at x = 1/2."""
    iv = connection_indicator_array(p.d, p.ell, [p.lam], p.potential)
    if iv.tail[0] > tol:
        raise PrecisionError(f"series tail {iv.tail[0]:.2e} above tolerance at the matching point")
    return complex(iv.value[0])


def solution_at_zero(d: int, ell: int, lam: complex, rho, potential: str = "u-star", N: int | None = None):
    """Analytic-at-0 solution f(rho) = rho^l sum c_k rho^(2k), for |rho|^2 inside the disk."""
    pr = _problem(d, ell, potential)
    N = N or _truncation(X_MATCH / pr.radius0)
    A, B, C = _coeffs_at_zero(pr, np.array([lam], complex))
    c = _series(A, B, C, ell / 2, N)[:, 0]
    rho = np.asarray(rho, dtype=float)
    x = rho ** 2
    return rho ** ell * npoly.polyval(x, c)


# ---------------------------------------------------------------------------
# root location

@dataclass
class Root:
    """A located eigenvalue.

    ``indicator`` is |W| in the fixed normalization of the two branches.
    ``proportionality`` is the scale-free |W|/(|y0 y1'| + |y0' y1|); it is not small
    at exceptional lambda where every solution is analytic at x = 1 and the rescaled
    branch at 1 degenerates.
    """

    lam: complex
    multiplicity: int
    indicator: float
    proportionality: float
    exceptional: bool


@dataclass
class ScanResult:
    d: int
    ell: int
    potential: str
    region: tuple[float, float, float, float]
    roots: list[Root]
    grid: np.ndarray | None = None
    grid_values: np.ndarray | None = None
    total_winding: int = 0
    max_tail: float = 0.0
    exploratory: bool = False
    diagnostics: dict = field(default_factory=dict)

    def real_roots(self, tol: float = 1e-8) -> list[float]:
        return [r.lam.real for r in self.roots if abs(r.lam.imag) < tol]


class _Indicator:
    def __init__(self, d, ell, potential):
        self.d, self.ell, self.potential = d, ell, potential
        self.max_tail = 0.0

    def __call__(self, lam):
        iv = connection_indicator_array(self.d, self.ell, lam, self.potential)
        self.max_tail = max(self.max_tail, float(np.max(iv.tail)))
        return iv.value


def _winding(f, z0: complex, z1: complex, z2: complex, z3: complex, min_pts: int = 64,
             max_depth: int = 12) -> tuple[int, float]:
    """Winding number of f around the closed polygon z0-z1-z2-z3, with adaptive edge sampling."""
    total = 0.0
    fmin = math.inf
    for a, b in ((z0, z1), (z1, z2), (z2, z3), (z3, z0)):
        t = np.linspace(0, 1, min_pts + 1)
        pts = a + (b - a) * t
        vals = f(pts)
        for _ in range(max_depth):
            dphi = np.angle(vals[1:] / vals[:-1])
            bad = np.abs(dphi) > math.pi / 6
            if not bad.any():
                break
            mids = 0.5 * (t[:-1] + t[1:])[bad]
            new_vals = f(a + (b - a) * mids)
            t = np.concatenate([t, mids])
            vals = np.concatenate([vals, new_vals])
            order = np.argsort(t)
            t, vals = t[order], vals[order]
        fmin = min(fmin, float(np.min(np.abs(vals))))
        total += float(np.sum(np.angle(vals[1:] / vals[:-1])))
    return int(round(total / (2 * math.pi))), fmin


def _newton(f, z: complex, tol: float = 1e-13, maxit: int = 60) -> complex:
    h = 1e-6
    for _ in range(maxit):
        vals = f(np.array([z, z + h, z - h, z + 1j * h, z - 1j * h]))
        fz = vals[0]
        dfz = (vals[1] - vals[2]) / (2 * h)
        if dfz == 0:
            break
        step = fz / dfz
        z = z - step
        if abs(step) < tol * max(1.0, abs(z)):
            break
    return z


def _clear_edges(f, re0, re1, im0, im1, samples: int = 257, rel: float = 1e-8, push: float = 1e-2):
    """Move any edge of the rectangle that passes through a zero slightly outward."""
    moved = []
    for _ in range(3):
        edges = {
            "re-min": re0 + 1j * np.linspace(im0, im1, samples),
            "re-max": re1 + 1j * np.linspace(im0, im1, samples),
            "im-min": np.linspace(re0, re1, samples) + 1j * im0,
            "im-max": np.linspace(re0, re1, samples) + 1j * im1,
        }
        hit = [k for k, z in edges.items()
               if np.min(np.abs(v := f(z))) < rel * np.median(np.abs(v))]
        if not hit:
            break
        w, h = re1 - re0, im1 - im0
        for k in hit:
            moved.append(k)
            if k == "re-min":
                re0 -= push * w
            elif k == "re-max":
                re1 += push * w
            elif k == "im-min":
                im0 -= push * h
            else:
                im1 += push * h
    return re0, re1, im0, im1, moved


def eigenvalue_scan(d: int, ell: int, region=(0.0, 4.0, -2.0, 2.0), potential: str = "u-star",
                    grid: tuple[int, int] | None = None, min_box: float = 0.02,
                    max_boxes: int = 4000) -> ScanResult:
    """All zeros of the connection indicator inside a rectangle, Newton-refined.

    Zeros are counted by the argument principle on rectangle boundaries and
    isolated by quadtree subdivision.  An edge passing through a zero is pushed
    outward by one percent and reported under ``diagnostics["contour-moved"]``.
    """
    re0, re1, im0, im1 = region
    if not (re0 < re1 and im0 < im1):
        raise ValueError("empty scan region")
    f = _Indicator(d, ell, potential)
    requested = (re0, re1, im0, im1)
    re0, re1, im0, im1, moved = _clear_edges(f, re0, re1, im0, im1)
    total, _ = _winding(f, complex(re0, im0), complex(re1, im0), complex(re1, im1), complex(re0, im1))
    boxes = [(re0, re1, im0, im1, total)]
    found: list[Root] = []
    visited = 0
    while boxes:
        a0, a1, b0, b1, count = boxes.pop()
        visited += 1
        if visited > max_boxes:
            raise RuntimeError("scan refinement budget exhausted")
        if count == 0:
            continue
        w = max(a1 - a0, b1 - b0)
        if w < min_box:
            z = _newton(f, complex((a0 + a1) / 2, (b0 + b1) / 2))
            iv = connection_indicator_array(d, ell, [z], potential)
            m = (d - 5) / 2 - z
            exceptional = abs(m - round(m.real)) < 1e-9 and 1 <= round(m.real) <= _resonance_order(d)
            found.append(Root(z, count, float(abs(iv.value[0])), float(iv.normalized[0]), exceptional))
            continue
        # split slightly off-centre so that symmetric roots never land on a cut
        am = a0 + (a1 - a0) * 0.5137
        bm = b0 + (b1 - b0) * 0.4871
        subs = [(a0, am, b0, bm), (am, a1, b0, bm), (am, a1, bm, b1), (a0, am, bm, b1)]
        counts = []
        for s in subs:
            c, _ = _winding(f, complex(s[0], s[2]), complex(s[1], s[2]), complex(s[1], s[3]), complex(s[0], s[3]),
                            min_pts=16)
            counts.append(c)
        if sum(counts) != count:
            # a zero sits near an internal cut: recount with the other offset
            am = a0 + (a1 - a0) * 0.4713
            bm = b0 + (b1 - b0) * 0.5291
            subs = [(a0, am, b0, bm), (am, a1, b0, bm), (am, a1, bm, b1), (a0, am, bm, b1)]
            counts = [_winding(f, complex(s[0], s[2]), complex(s[1], s[2]), complex(s[1], s[3]),
                               complex(s[0], s[3]), min_pts=32)[0] for s in subs]
            if sum(counts) != count:
                raise RuntimeError("argument-principle count mismatch; refine the grid")
        for s, c in zip(subs, counts):
            if c:
                boxes.append((*s, c))
    # merge duplicates from adjacent boxes
    roots: list[Root] = []
    for r in sorted(found, key=lambda r: (r.lam.real, r.lam.imag)):
        if roots and abs(roots[-1].lam - r.lam) < 1e-7:
            roots[-1].multiplicity += r.multiplicity
            continue
        roots.append(r)
    res = ScanResult(d, ell, potential, tuple(region), roots, total_winding=total,
                     exploratory=(potential == "u-star" and d != 9))
    if moved:
        res.diagnostics["contour-moved"] = {"edges": moved, "region": [re0, re1, im0, im1],
                                            "requested": list(requested)}
    if grid is not None:
        nr, ni = grid
        X, Y = np.meshgrid(np.linspace(re0, re1, nr), np.linspace(im0, im1, ni), indexing="ij")
        Z = (X + 1j * Y).ravel()
        iv = connection_indicator_array(d, ell, Z, potential)
        res.grid = Z
        res.grid_values = iv.normalized
    res.max_tail = f.max_tail
    return res


@dataclass
class SpectralGap:
    """Empirical gap below the imaginary axis: the largest real part of a root in the strip."""

    d: int
    ell: int
    floor: float
    roots: list[Root]

    @property
    def gap(self) -> float:
        """Distance from the axis to the nearest stable root, or the strip depth if none was found."""
        return -max((r.lam.real for r in self.roots), default=self.floor)

    @property
    def is_lower_bound(self) -> bool:
        return not self.roots


def spectral_gap(d: int, ell: int, floor: float = -0.4, height: float = 2.0, ceiling: float = -1e-3) -> SpectralGap:
    """Scan the strip floor <= Re lam < 0 for the stable root nearest the axis.

    Not a rigorous bound: only the window |Im lam| <= height is searched.
    """
    if not floor < ceiling < 0:
        raise ValueError("need floor < ceiling < 0")
    res = eigenvalue_scan(d, ell, (floor, ceiling, -height, height))
    return SpectralGap(d, ell, floor, res.roots)


# ---------------------------------------------------------------------------
# Gamma function and the constant-profile connection coefficient

_LANCZOS_G = 7
_LANCZOS = (
    0.99999999999980993, 676.5203681218851, -1259.1392167224028, 771.32342877765313,
    -176.61502916214059, 12.507343278686905, -0.13857109526572012,
    9.9843695780195716e-6, 1.5056327351493116e-7,
)


def _is_nonpositive_integer(z: complex) -> bool:
    return z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real)


def gamma(z: complex) -> complex:
    """Lanczos approximation with reflection; raises ZeroDivisionError at poles."""
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise ZeroDivisionError(f"Gamma pole at {z.real:g}")
    if z.real < 0.5:
        return cmath.pi / (cmath.sin(cmath.pi * z) * gamma(1 - z))
    z -= 1
    x = _LANCZOS[0]
    for i in range(1, _LANCZOS_G + 2):
        x += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return cmath.sqrt(2 * cmath.pi) * t ** (z + 0.5) * cmath.exp(-t) * x


def rgamma(z: complex) -> complex:
    """1/Gamma, entire; exactly zero at the poles of Gamma."""
    z = complex(z)
    if _is_nonpositive_integer(z):
        return 0j
    if z.real < 0.5:
        return cmath.sin(cmath.pi * z) * gamma(1 - z) / cmath.pi
    return 1 / gamma(z)


@dataclass(frozen=True)
class ConnectionCoefficient:
    value: complex
    kind: str  # "power" or "log"
    a: complex
    b: complex
    c: complex

    @property
    def vanishes(self) -> bool:
        return self.value == 0


def connection_coefficient_kappa(d: int, ell: int, lam: complex) -> ConnectionCoefficient:
    """Coefficient of the branch singular at rho = 1 in the solution regular at rho = 0.

    With a = (lam+l-1)/2, b = (lam+l+6)/2, c = d/2 + l the regular solution is
    rho^l 2F1(a, b; c; rho^2).  If c - a - b is not a nonnegative integer the singular
    branch (1 - z)^(c-a-b) carries Gamma(c)Gamma(a+b-c)/(Gamma(a)Gamma(b)); otherwise
    the log term (1 - z)^m log(1 - z) carries -Gamma(c)/(Gamma(a)Gamma(b) m!).
    """
    lam = complex(lam)
    a = (lam + ell - 1) / 2
    b = (lam + ell + 6) / 2
    c = complex(d / 2 + ell)
    m = c - a - b
    ra, rb = rgamma(a), rgamma(b)
    if m.imag == 0 and m.real >= 0 and m.real == math.floor(m.real):
        k = int(m.real)
        return ConnectionCoefficient(-gamma(c) * ra * rb / math.factorial(k), "log", a, b, c)
    return ConnectionCoefficient(gamma(c) * gamma(-m) * ra * rb, "power", a, b, c)


def kappa_spectrum(d: int, ell: int, sigma: float = 0.0) -> list[int]:
    """Eigenvalues of the constant-profile linearization in the half-plane Re lam >= sigma.

    They are the lam with -a in N_0, i.e. lam = 1 - l - 2n; the -b branch lies left of -1/2.
    """
    if sigma < -0.5:
        raise ValueError("half-plane must satisfy sigma >= -1/2")
    if d not in (7, 9):
        raise ValueError("constant-profile spectrum is provided for d in {7, 9}")
    out = []
    n = 0
    while 1 - ell - 2 * n >= sigma:
        out.append(1 - ell - 2 * n)
        n += 1
    return sorted(out)


def kappa_zero_scan(d: int, ell: int, lo: float = -0.5, hi: float = 6.0, step: Fraction = Fraction(1, 20)) -> list[Fraction]:
    """Rational grid points in [lo, hi] where the connection coefficient vanishes exactly."""
    zeros = []
    lam = Fraction(lo).limit_denominator(1000)
    while lam <= hi:
        if lam >= lo and connection_coefficient_kappa(d, ell, float(lam)).vanishes:
            zeros.append(lam)
        lam += step
    return zeros


def ode_blowup_spectrum(d: int, ell: int, sigma: float = 0.0) -> list[int]:
    return kappa_spectrum(d, ell, sigma)


__all__ = [
    "ConnectionCoefficient", "IndicatorValues", "PrecisionError", "Root", "ScanResult", "SpectralGap", "SpectralPoint",
    "connection_coefficient_kappa", "connection_indicator", "connection_indicator_array",
    "eigenvalue_scan", "gamma", "kappa_spectrum", "kappa_zero_scan", "ode_blowup_spectrum",
    "rgamma", "solution_at_zero", "spectral_gap",
]
