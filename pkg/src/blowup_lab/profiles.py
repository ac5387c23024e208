"""Closed-form blowup profiles, their Lorentz boosts and the unstable eigenfunctions.

All derivatives are produced by second-order Taylor jets pushed through the
rational closed forms, so rational inputs give exact residuals.
"""

from __future__ import annotations

import math
from contextlib import nullcontext
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np
from scipy.integrate import trapezoid

Number = Fraction | float | mpmath.mpf

PRECISIONS = ("exact", "f64", "f128")


# ---------------------------------------------------------------------------
# second-order jets

class Jet:
    """Truncated Taylor series c0 + c1 e + c2 e^2 over any field."""

    __slots__ = ("c0", "c1", "c2")

    def __init__(self, c0, c1=0, c2=0):
        self.c0, self.c1, self.c2 = c0, c1, c2

    @staticmethod
    def lift(x) -> Jet:
        return x if isinstance(x, Jet) else Jet(x, 0 * x, 0 * x)

    def __add__(self, o):
        o = Jet.lift(o)
        return Jet(self.c0 + o.c0, self.c1 + o.c1, self.c2 + o.c2)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.c0, -self.c1, -self.c2)

    def __sub__(self, o):
        return self + (-Jet.lift(o))

    def __rsub__(self, o):
        return Jet.lift(o) - self

    def __mul__(self, o):
        o = Jet.lift(o)
        return Jet(self.c0 * o.c0, self.c0 * o.c1 + self.c1 * o.c0,
                   self.c0 * o.c2 + self.c1 * o.c1 + self.c2 * o.c0)

    __rmul__ = __mul__

    def reciprocal(self) -> Jet:
        inv = 1 / self.c0
        b1 = -self.c1 * inv * inv
        b2 = (self.c1 * self.c1 * inv - self.c2) * inv * inv
        return Jet(inv, b1, b2)

    def __truediv__(self, o):
        return self * Jet.lift(o).reciprocal()

    def __rtruediv__(self, o):
        return Jet.lift(o) * self.reciprocal()

    def __pow__(self, k: int):
        out = Jet.lift(1 + 0 * self.c0)
        for _ in range(k):
            out = out * self
        return out

    @property
    def first(self):
        return self.c1

    @property
    def second(self):
        return 2 * self.c2


# ---------------------------------------------------------------------------
# constants

@dataclass(frozen=True)
class ProfileConstants:
    d: int
    d0: Number
    c1: Number
    c2: Number
    c3: Number
    exact: bool

    @property
    def rho_star_sq(self) -> Number:
        """Square of the unique positive zero of the radial profile."""
        return self.c1 / self.c2


def profile_constants(d: int, precision: str = "f64") -> ProfileConstants:
    """Profile coefficients; exact Fractions whenever 6(d-1)(d-6) is a perfect square."""
    if not isinstance(d, int) or d < 7:
        raise ValueError("profile constants need an integer dimension d >= 7")
    sq = 6 * (d - 1) * (d - 6)
    r = math.isqrt(sq)
    if r * r == sq:
        d0 = Fraction(r)
        return ProfileConstants(d, d0, Fraction(4, 25) * ((3 * d - 8) * d0 + 8 * d * d - 56 * d + 48),
                                Fraction(4, 5) * d0, Fraction(1, 15) * (3 * d - 18 + d0), True)
    with precision_context(precision):
        d0 = mpmath.sqrt(mpmath.mpf(sq)) if precision == "f128" else math.sqrt(sq)
        c1 = 4 * ((3 * d - 8) * d0 + 8 * d * d - 56 * d + 48) / 25
        c2 = 4 * d0 / 5
        c3 = (3 * d - 18 + d0) / 15
    return ProfileConstants(d, d0, c1, c2, c3, False)


def radial_profile(c: ProfileConstants, rho):
    r2 = rho * rho
    return (c.c1 - c.c2 * r2) / ((c.c3 + r2) ** 2)


def potential(c: ProfileConstants, rho):
    """Linearization potential 2U."""
    return 2 * radial_profile(c, rho)


# ---------------------------------------------------------------------------
# boosts

@dataclass(frozen=True)
class BoostKernel:
    """cosh/sinh of the rapidities and the derived gamma coefficients."""

    cosh: tuple
    sinh: tuple

    @classmethod
    def from_rapidities(cls, a: Sequence[float], precision: str = "f64") -> BoostKernel:
        if precision == "f128":
            with mpmath.workprec(113):
                return cls(tuple(mpmath.cosh(x) for x in a), tuple(mpmath.sinh(x) for x in a))
        return cls(tuple(math.cosh(x) for x in a), tuple(math.sinh(x) for x in a))

    @classmethod
    def from_exponentials(cls, q: Sequence[Fraction | int]) -> BoostKernel:
        """Exact kernel from q_j = exp(a_j) > 0 rational."""
        q = [Fraction(x) for x in q]
        if any(x <= 0 for x in q):
            raise ValueError("exponentials of rapidities must be positive")
        return cls(tuple((x + 1 / x) / 2 for x in q), tuple((x - 1 / x) / 2 for x in q))

    @classmethod
    def identity(cls, d: int, exact: bool = True) -> BoostKernel:
        one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
        return cls((one,) * d, (zero,) * d)

    @property
    def d(self) -> int:
        return len(self.cosh)

    @property
    def A0(self):
        out = self.cosh[0] * 0 + 1
        for c in self.cosh:
            out = out * c
        return out

    @property
    def A(self) -> list:
        d = self.d
        out = []
        for j in range(d):
            v = self.sinh[j]
            for i in range(j + 1, d):
                v = v * self.cosh[i]
            out.append(v)
        return out

    @property
    def B(self) -> list:
        d = self.d
        out = []
        for j in range(d):
            v = self.cosh[0] * 0 + 1
            for i in range(j + 1, d):
                v = v / self.cosh[i]
            out.append(v)
        return out

    def dA(self, k: int) -> tuple:
        """(d A0/d a_k, [d A_j/d a_k for j])."""
        d = self.d
        d0 = self.sinh[k]
        for i in range(d):
            if i != k:
                d0 = d0 * self.cosh[i]
        dj = []
        for j in range(d):
            if k < j:
                dj.append(0 * d0)
                continue
            v = self.cosh[j] if k == j else self.sinh[j]
            for i in range(j + 1, d):
                v = v * (self.sinh[i] if i == k else self.cosh[i])
            dj.append(v)
        return d0, dj

    def hyperbolic_defect(self):
        """A0^2 - sum A_j^2 - 1; zero for a valid kernel."""
        return self.A0 ** 2 - sum(x * x for x in self.A) - 1

    def gamma(self, xi):
        A0, A = self.A0, self.A
        return A0 - sum(Aj * x for Aj, x in zip(A, xi))

    def dgamma(self, k: int, xi):
        d0, dj = self.dA(k)
        return d0 - sum(a * x for a, x in zip(dj, xi))

    def is_rational(self) -> bool:
        return all(isinstance(x, (Fraction, int)) for x in self.cosh + self.sinh)


def boost_map(kernel: BoostKernel, T, x0: Sequence, t, x: Sequence) -> tuple:
    """(t', x') obtained by translating to (T, x0), boosting and reflecting time."""
    tt = t - T
    y = [xi - x0i for xi, x0i in zip(x, x0)]
    for j in range(kernel.d):
        ch, sh = kernel.cosh[j], kernel.sinh[j]
        tt, y[j] = tt * ch + y[j] * sh, tt * sh + y[j] * ch
    return -tt, y


# ---------------------------------------------------------------------------
# families

@dataclass(frozen=True)
class BlowupFamily:
    kind: str  # "u-star" or "kappa"
    d: int
    T: Number = 1
    x0: tuple = ()
    kernel: BoostKernel | None = None
    precision: str = "exact"
    constants: ProfileConstants | None = None

    def __post_init__(self):
        if self.kind not in ("u-star", "kappa"):
            raise ValueError("family kind must be 'u-star' or 'kappa'")
        exact = self.precision == "exact"
        if self.kind == "u-star" and self.constants is None:
            c = profile_constants(self.d, self.precision)
            if exact and not c.exact:
                raise ValueError(f"d = {self.d} has irrational profile constants; use f64 or f128")
            object.__setattr__(self, "constants", c)
        if self.kernel is None:
            object.__setattr__(self, "kernel", BoostKernel.identity(self.d, exact))
        if not self.x0:
            object.__setattr__(self, "x0", tuple([Fraction(0) if exact else 0.0] * self.d))
        if self.kernel.d != self.d or len(self.x0) != self.d:
            raise ValueError("boost and blowup point must have the family dimension")

    def with_constants(self, **changes) -> BlowupFamily:
        """Same family with altered profile constants (used for negative controls)."""
        return replace(self, constants=replace(self.constants, **changes))

    # similarity-variable profile
    def profile(self, xi: Sequence):
        g = self.kernel.gamma(xi)
        if self.kind == "kappa":
            return 6 / (g * g)
        r2 = sum(x * x for x in xi)
        return _boosted_u(self.constants, g, r2)

    # physical solution
    def solution(self, t, x: Sequence):
        s = self.T - t
        y = [xi - x0 for xi, x0 in zip(x, self.x0)]
        return self._solution_from(s, y)

    def _solution_from(self, s, y):
        k = self.kernel
        G = k.A0 * s - sum(a * yi for a, yi in zip(k.A, y))
        if self.kind == "kappa":
            return 6 / (G * G)
        c = self.constants
        y2 = sum(yi * yi for yi in y)
        num = (c.c1 - c.c2) * G * G + c.c2 * (s * s - y2)
        den = (1 + c.c3) * G * G + y2 - s * s
        return num / (den * den)


def _boosted_u(c: ProfileConstants, g, r2):
    num = (c.c1 - c.c2) * g * g + c.c2 * (1 - r2)
    den = (1 + c.c3) * g * g + r2 - 1
    return num / (den * den)


def eval_profile(family: BlowupFamily, xi: Sequence):
    """U_a(xi) or the boosted constant profile 6 gamma^-2."""
    if family.kind == "u-star":
        g = family.kernel.gamma(xi)
        c = family.constants
        den = (1 + c.c3) * g * g + sum(x * x for x in xi) - 1
        if den == 0:
            raise ZeroDivisionError("profile pole: vanishing denominator")
    return family.profile(xi)


def _in_cone(family: BlowupFamily, t, x) -> bool:
    s = family.T - t
    y2 = sum((xi - x0) ** 2 for xi, x0 in zip(x, family.x0))
    return s > 0 and y2 <= s * s


def precision_context(precision: str):
    """Working-precision context: 113-bit mpmath for f128, a no-op otherwise."""
    return mpmath.workprec(113) if precision == "f128" else nullcontext()


def pde_residual(family: BlowupFamily, t, x: Sequence):
    """u_tt - Laplacian u - u^2 at a point of the backward light cone."""
    if family.precision == "f128":
        with precision_context("f128"):
            return _pde_residual(family, mpmath.mpf(t), [mpmath.mpf(v) for v in x])
    return _pde_residual(family, t, x)


def _pde_residual(family: BlowupFamily, t, x: Sequence):
    if not _in_cone(family, t, x):
        raise ValueError("point outside the backward light cone of the blowup point")
    s = family.T - t
    y = [xi - x0 for xi, x0 in zip(x, family.x0)]
    u0 = family._solution_from(s, y)
    # d/dt = -d/ds
    js = family._solution_from(Jet(s, 1, 0), [Jet.lift(yi) for yi in y])
    u_tt = js.second
    lap = 0 * u0
    for i in range(family.d):
        yj = [Jet(yi, 1, 0) if k == i else Jet.lift(yi) for k, yi in enumerate(y)]
        lap = lap + family._solution_from(Jet.lift(s), yj).second
    return u_tt - lap - u0 * u0


def family_via_boost_map(family: BlowupFamily, t, x):
    """The solution evaluated as u*(t', x') or 6/t'^2 through the coordinate boost."""
    tp, xp = boost_map(family.kernel, family.T, family.x0, t, x)
    if family.kind == "kappa":
        return 6 / (tp * tp)
    r2 = sum(v * v for v in xp)
    c = family.constants
    # t'^-2 U(|x'|/t') without square roots
    return (c.c1 * tp * tp - c.c2 * r2) / ((c.c3 * tp * tp + r2) ** 2)


# ---------------------------------------------------------------------------
# positivity and scaling

@dataclass
class PositivityResult:
    verdict: str  # certified-positive | inconclusive | negative
    minimum: float
    argmin: tuple
    slack: float


def positivity_on_ball(family: BlowupFamily, resolution: int = 200) -> PositivityResult:
    """Grid minimum of U_a on the closed unit ball with a Lipschitz slack.

    U_a depends on xi only through A.xi and |xi|, so the search runs over the
    half-disk spanned by the boost direction and one orthogonal direction.
    """
    if family.kind != "u-star":
        raise ValueError("positivity scan applies to the u-star family")
    c = family.constants
    c1, c2, c3 = float(c.c1), float(c.c2), float(c.c3)
    A0 = float(family.kernel.A0)
    A = np.array([float(v) for v in family.kernel.A])
    nA = float(np.linalg.norm(A))
    h = 1.0 / resolution
    p = np.linspace(-1, 1, 2 * resolution + 1)
    q = np.linspace(0, 1, resolution + 1)
    P, Q = np.meshgrid(p, q, indexing="ij")
    inside = P * P + Q * Q <= 1 + 1e-15
    r2 = np.where(inside, P * P + Q * Q, np.nan)
    g = A0 - nA * P
    U = ((c1 - c2) * g * g + c2 * (1 - r2)) / ((1 + c3) * g * g + r2 - 1) ** 2
    gp, gq = np.gradient(U, h, h)
    lip = float(np.nanmax(np.hypot(gp, gq)))
    slack = 1.5 * lip * h * math.sqrt(2) / 2
    idx = np.nanargmin(U)
    i, j = np.unravel_index(idx, U.shape)
    umin = float(U[i, j])
    if umin <= 0:
        verdict = "negative"
    elif umin - slack > 0:
        verdict = "certified-positive"
    else:
        verdict = "inconclusive"
    return PositivityResult(verdict, umin, (float(P[i, j]), float(Q[i, j])), slack)


def scaling_exponents(family: BlowupFamily, orders=(0, 1, 2), spacing: float = 2e-4,
                      radii=(0.05, 0.1, 0.2, 0.4, 0.8)) -> dict[int, float]:
    """Log-log slopes of the homogeneous Sobolev seminorms of U(x/s) on the ball of radius s.

    Radial data only (a = 0); the grid spacing is fixed in physical units.
    """
    if family.kind != "u-star":
        raise ValueError("scaling law applies to the u-star family")
    c = family.constants
    c1, c2, c3 = float(c.c1), float(c.c2), float(c.c3)
    d = family.d
    out = {}
    norms = {k: [] for k in orders}
    for s in radii:
        n = max(int(round(s / spacing)), 50)
        r = np.linspace(0, s, n + 1)
        f = (c1 - c2 * (r / s) ** 2) / (c3 + (r / s) ** 2) ** 2
        f1 = np.gradient(f, r, edge_order=2)
        f2 = np.gradient(f1, r, edge_order=2)
        w = r ** (d - 1)
        with np.errstate(divide="ignore", invalid="ignore"):
            dens = {
                0: f * f,
                1: f1 * f1,
                2: f2 * f2 + (d - 1) * np.where(r > 0, (f1 / r) ** 2, f2 * f2),
            }
        for k in orders:
            norms[k].append(math.sqrt(float(trapezoid(dens[k] * w, r))))
    for k in orders:
        slope = np.polyfit(np.log(radii), np.log(norms[k]), 1)[0]
        out[k] = float(slope)
    return out


# ---------------------------------------------------------------------------
# eigenfunctions

EIGENVALUES = {"h": 3, "g": 1, "q": 0}


def _parse_mode(label: str, d: int) -> tuple[str, int]:
    if label == "h":
        return "h", 0
    if len(label) >= 2 and label[0] in "gq" and label[1:].isdigit():
        k = int(label[1:])
        if label[0] == "g" and 0 <= k <= d or label[0] == "q" and 1 <= k <= d:
            return label[0], k
    raise ValueError(f"unknown eigenmode label {label!r}")


@dataclass
class EigenField:
    """One unstable eigenfunction pair of the linearization around U_a."""

    label: str
    family: BlowupFamily
    kind: str = field(init=False)
    index: int = field(init=False)

    def __post_init__(self):
        if self.family.kind != "u-star":
            raise ValueError("eigenfields are defined for the u-star family")
        self.kind, self.index = _parse_mode(self.label, self.family.d)

    @property
    def eigenvalue(self) -> int:
        return EIGENVALUES[self.kind]

    def first(self, xi: Sequence):
        """First component; accepts numbers or jets."""
        k = self.family.kernel
        g = k.gamma(xi)
        r2 = sum(x * x for x in xi)
        w = 12 * g * g + 5 * r2 - 5
        w3 = w * w * w
        if self.kind == "h":
            return g / w3
        if self.kind == "g" and self.index == 0:
            return (r2 - 1) * g / w3
        dg = k.dgamma(self.index - 1, xi)
        if self.kind == "g":
            return (72 * g * g + 5 - 5 * r2) * dg / w3
        c = self.family.constants
        num = (c.c1 - c.c2) * g * g + c.c2 * (1 - r2)
        den = (1 + c.c3) * g * g + r2 - 1
        return 2 * g * ((c.c1 - c.c2) * den - 2 * (1 + c.c3) * num) / (den * den * den) * dg

    def derivatives(self, xi: Sequence) -> dict:
        """u1, D u1, D^2 u1 and Laplacian u1 with D the Euler operator xi.grad."""
        u = self.first(xi)
        euler = self.first([Jet(x, x, x / 2) for x in xi])
        lap = 0 * u
        for i in range(len(xi)):
            lap = lap + self.first([Jet(x, 1, 0) if j == i else Jet.lift(x) for j, x in enumerate(xi)]).second
        return {"u": u, "Du": euler.first, "DDu": euler.second, "lap": lap}

    def second(self, xi: Sequence):
        der = self.derivatives(xi)
        return der["Du"] + (self.eigenvalue + 2) * der["u"]

    def residual(self, xi: Sequence) -> tuple:
        """Both components of (lambda - L~ - L'_a) applied to the pair."""
        lam = self.eigenvalue
        der = self.derivatives(xi)
        u1 = der["u"]
        u2 = der["Du"] + (lam + 2) * u1
        Du2 = der["DDu"] + (lam + 2) * der["Du"]
        V = 2 * self.family.profile(xi)
        r1 = lam * u1 + der["Du"] + 2 * u1 - u2
        r2 = lam * u2 - der["lap"] + Du2 + 3 * u2 - V * u1
        return r1, r2


def eigen_residual(mode: EigenField, points: Sequence[Sequence]) -> float | Fraction:
    """Sup over the points of the absolute componentwise residual."""
    worst = 0
    for xi in points:
        r1, r2 = mode.residual(xi)
        worst = max(worst, abs(r1), abs(r2))
    return worst


def ball_points(d: int, count: int, seed: int = 0, exact: bool = False, radius: float = 0.95) -> list:
    """Deterministic sample of points inside the ball of the given radius."""
    rng = np.random.default_rng(seed)
    pts = []
    while len(pts) < count:
        v = rng.uniform(-1, 1, d)
        nv = float(np.linalg.norm(v))
        if nv == 0:
            continue
        v = v / nv * radius * rng.uniform() ** (1 / d)
        pts.append([Fraction(float(x)).limit_denominator(97) for x in v] if exact else [float(x) for x in v])
    if exact:
        pts = [p for p in pts if sum(x * x for x in p) < 1]
    return pts


def static_pair(family: BlowupFamily, xi: Sequence) -> tuple:
    """(U_a, xi.grad U_a + 2 U_a) at one point."""
    j = family.profile([Jet(x, x, 0) for x in xi])
    return j.c0, j.c1 + 2 * j.c0


def correction_pair_rho(rho):
    """Radial (h1, h2) used in the stability statement for d = 9."""
    r2 = rho * rho
    return 1 / (7 + 5 * r2) ** 3, (35 - 5 * r2) / (7 + 5 * r2) ** 4


def radial_eigen_pairs(rho) -> dict[str, tuple]:
    """Radial a = 0 eigenpairs for d = 9: h (lambda 3) and g0 (lambda 1)."""
    r2 = rho * rho
    w = 7 + 5 * r2
    h1 = 1 / w ** 3
    h1p = -30 * rho / w ** 4
    g1 = (1 - r2) / w ** 3
    g1p = (-2 * rho * w - 30 * rho * (1 - r2)) / w ** 4
    return {"h": (h1, rho * h1p + 5 * h1), "g0": (g1, rho * g1p + 3 * g1)}


__all__ = [
    "BlowupFamily", "BoostKernel", "EigenField", "Jet", "PositivityResult", "ProfileConstants",
    "ball_points", "boost_map", "correction_pair_rho", "eigen_residual", "eval_profile",
    "family_via_boost_map", "pde_residual", "precision_context", "positivity_on_ball", "potential", "profile_constants",
    "radial_eigen_pairs", "radial_profile", "scaling_exponents", "static_pair",
]

