"""Exact adapted inner products on polynomial test fields.

All integrals are taken over the unit ball or the unit sphere and divided by the
sphere area, so every quantity is rational.  A monomial moment is

    sphere:  prod (a_i - 1)!! / prod_{j<m} (d + 2j),   |a| = 2m, all a_i even
    ball:    sphere moment / (|a| + d).

Derivative contractions sum over multisets of indices with multinomial weights,
so ``sum_{i,j,k} d_ijk u d_ijk v`` never expands the full index tensor.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial
from typing import Iterable, Mapping

Monomial = tuple[int, ...]
BALL, SPHERE = "ball", "sphere"
VERIFIED_DIMS = (7, 9)
VERIFIED_K = (3, 4, 5)
GAP_CONSTANT = {9: Fraction(1, 2), 7: Fraction(3, 2)}


# ---------------------------------------------------------------------------
# polynomials in xi

class XPoly:
    """Sparse polynomial in xi_1..xi_d with rational coefficients."""

    __slots__ = ("d", "terms")

    def __init__(self, d: int, terms: Mapping[Monomial, Fraction] | None = None):
        self.d = d
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, d: int, c) -> XPoly:
        return cls(d, {(0,) * d: Fraction(c)})

    @classmethod
    def coord(cls, d: int, i: int) -> XPoly:
        return cls(d, {tuple(int(j == i) for j in range(d)): Fraction(1)})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, XPoly) and self.d == other.d and self.terms == other.terms

    def __repr__(self) -> str:
        return f"XPoly(d={self.d}, terms={len(self.terms)})"

    def __add__(self, other: XPoly) -> XPoly:
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return XPoly(self.d, out)

    def __neg__(self) -> XPoly:
        return XPoly(self.d, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: XPoly) -> XPoly:
        return self + (-other)

    def scale(self, c) -> XPoly:
        c = Fraction(c)
        return XPoly(self.d, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other: XPoly) -> XPoly:
        out: dict[Monomial, Fraction] = {}
        for a, x in self.terms.items():
            for b, y in other.terms.items():
                m = tuple(i + j for i, j in zip(a, b))
                out[m] = out.get(m, 0) + x * y
        return XPoly(self.d, out)

    def partial(self, i: int) -> XPoly:
        out = {}
        for m, c in self.terms.items():
            if m[i]:
                n = list(m)
                n[i] -= 1
                out[tuple(n)] = c * m[i]
        return XPoly(self.d, out)

    def euler(self) -> XPoly:
        """xi . grad, which scales each monomial by its degree."""
        return XPoly(self.d, {m: c * sum(m) for m, c in self.terms.items()})

    def laplacian(self) -> XPoly:
        out = XPoly(self.d)
        for i in range(self.d):
            out = out + self.partial(i).partial(i)
        return out

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def __call__(self, xi) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            t = c
            for x, e in zip(xi, m):
                if e:
                    t *= Fraction(x) ** e
            total += t
        return total


@dataclass(frozen=True)
class PolyField:
    """A pair (u1, u2) of polynomials in xi."""

    u1: XPoly
    u2: XPoly

    def __post_init__(self):
        if self.u1.d != self.u2.d:
            raise ValueError("components must live in the same dimension")

    @property
    def d(self) -> int:
        return self.u1.d

    @property
    def degrees(self) -> tuple[int, int]:
        return self.u1.degree(), self.u2.degree()

    def __add__(self, other: PolyField) -> PolyField:
        return PolyField(self.u1 + other.u1, self.u2 + other.u2)

    def scale(self, c) -> PolyField:
        return PolyField(self.u1.scale(c), self.u2.scale(c))

    def is_zero(self) -> bool:
        return not self.u1 and not self.u2


def free_operator(u: PolyField) -> PolyField:
    """The free similarity operator: (-D u1 - 2u1 + u2, Lap u1 - D u2 - 3 u2)."""
    u1, u2 = u.u1, u.u2
    return PolyField(-u1.euler() - u1.scale(2) + u2, u1.laplacian() - u2.euler() - u2.scale(3))


# ---------------------------------------------------------------------------
# moments

@lru_cache(maxsize=None)
def _double_factorial_odd(n: int) -> int:
    # (n - 1)!! for even n
    out = 1
    for k in range(n - 1, 0, -2):
        out *= k
    return out


@lru_cache(maxsize=None)
def _sphere_moment(d: int, alpha: Monomial) -> Fraction:
    if any(a % 2 for a in alpha):
        return Fraction(0)
    m = sum(alpha) // 2
    num = 1
    for a in alpha:
        num *= _double_factorial_odd(a)
    den = 1
    for j in range(m):
        den *= d + 2 * j
    return Fraction(num, den)


def monomial_moment(domain: str, d: int, alpha: Iterable[int]) -> Fraction:
    """Integral of xi^alpha over the ball or sphere, in units of the sphere area."""
    if d < 2:
        raise ValueError("need d >= 2")
    alpha = tuple(alpha)
    if len(alpha) != d:
        raise ValueError("multi-index length must equal d")
    s = _sphere_moment(d, alpha)
    if domain == SPHERE:
        return s
    if domain == BALL:
        return s / (sum(alpha) + d)
    raise ValueError(f"domain must be {BALL!r} or {SPHERE!r}")


def integrate(p: XPoly, domain: str) -> Fraction:
    return sum((c * monomial_moment(domain, p.d, m) for m, c in p.terms.items()), Fraction(0))


def l2(u: XPoly, v: XPoly, domain: str) -> Fraction:
    total = Fraction(0)
    for a, x in u.terms.items():
        for b, y in v.terms.items():
            total += x * y * monomial_moment(domain, u.d, tuple(i + j for i, j in zip(a, b)))
    return total


def _falling(n: int, k: int) -> int:
    out = 1
    for j in range(k):
        out *= n - j
    return out


def _splits(bound: Monomial, order: int):
    """Multi-indices gamma <= bound with |gamma| = order."""
    if order < 0:
        return
    if not bound:
        if order == 0:
            yield ()
        return
    head, rest = bound[0], bound[1:]
    cap = sum(rest)
    for g in range(min(head, order), -1, -1):
        if order - g > cap:
            break
        for tail in _splits(rest, order - g):
            yield (g,) + tail


def derivative_pairing(u: XPoly, v: XPoly, order: int, domain: str) -> Fraction:
    """sum over all index tuples of length ``order`` of integral d_I u * d_I v."""
    if order == 0:
        return l2(u, v, domain)
    k_fact = factorial(order)
    total = Fraction(0)
    d = u.d
    for a, x in u.terms.items():
        if sum(a) < order:
            continue
        for b, y in v.terms.items():
            if sum(b) < order:
                continue
            bound = tuple(min(i, j) for i, j in zip(a, b))
            for g in _splits(bound, order):
                mult = k_fact
                coef = 1
                for ai, bi, gi in zip(a, b, g):
                    if gi:
                        mult //= factorial(gi)
                        coef *= _falling(ai, gi) * _falling(bi, gi)
                mono = tuple(ai + bi - 2 * gi for ai, bi, gi in zip(a, b, g))
                total += x * y * mult * coef * monomial_moment(domain, d, mono)
    return total


# ---------------------------------------------------------------------------
# the adapted inner product

def inner_part(u: PolyField, v: PolyField, j: int) -> Fraction:
    """The j-th summand of the adapted inner product."""
    if j == 1:
        return (derivative_pairing(u.u1, v.u1, 1, SPHERE) + l2(u.u1, v.u1, SPHERE)
                + l2(u.u2, v.u2, SPHERE))
    if j == 2:
        return (derivative_pairing(u.u1.laplacian(), v.u1.laplacian(), 1, BALL)
                + derivative_pairing(u.u2, v.u2, 2, BALL)
                + derivative_pairing(u.u2, v.u2, 1, SPHERE))
    if j == 3:
        return 4 * (derivative_pairing(u.u1, v.u1, 3, BALL) + derivative_pairing(u.u2, v.u2, 2, BALL)
                    + derivative_pairing(u.u1, v.u1, 2, SPHERE))
    if j >= 4:
        return derivative_pairing(u.u1, v.u1, j, BALL) + derivative_pairing(u.u2, v.u2, j - 1, BALL)
    raise ValueError("parts are indexed from 1")


def hk_inner(u: PolyField, v: PolyField, k: int) -> Fraction:
    """Adapted inner product (units of the sphere area); real data, so it is symmetric."""
    if k < 3:
        raise ValueError("the adapted inner product is defined for k >= 3")
    if u.d != v.d:
        raise ValueError("dimension mismatch")
    return sum((inner_part(u, v, j) for j in range(1, k + 1)), Fraction(0))


def hk_norm_sq(u: PolyField, k: int) -> Fraction:
    return hk_inner(u, u, k)


def standard_norm_sq(u: PolyField, k: int) -> Fraction:
    """Full H^k x H^{k-1} norm on the ball."""
    return (sum((derivative_pairing(u.u1, u.u1, j, BALL) for j in range(k + 1)), Fraction(0))
            + sum((derivative_pairing(u.u2, u.u2, j, BALL) for j in range(k)), Fraction(0)))


@dataclass(frozen=True)
class GapResult:
    gap: Fraction
    pairing: Fraction
    norm_sq: Fraction
    constant: Fraction
    exploratory: bool

    @property
    def holds(self) -> bool:
        return self.gap <= 0


def dissipativity_gap(u: PolyField, k: int = 5) -> GapResult:
    """Re(Lu|u) + c_d ||u||^2 in the adapted inner product; the bound claims it is <= 0."""
    d = u.d
    c = GAP_CONSTANT.get(d, Fraction(1, 2))
    pairing = hk_inner(free_operator(u), u, k)
    norm = hk_norm_sq(u, k)
    exploratory = d not in VERIFIED_DIMS or k not in VERIFIED_K
    return GapResult(pairing + c * norm, pairing, norm, c, exploratory)


def euler_identity_defect(f: XPoly) -> Fraction:
    """2 int_B (xi.grad f) f - int_S f^2 + d int_B f^2; zero by the divergence theorem."""
    return 2 * l2(f.euler(), f, BALL) - l2(f, f, SPHERE) + f.d * l2(f, f, BALL)


# ---------------------------------------------------------------------------
# corpora and equivalence probes

def random_xpoly(d: int, degree: int, rng: random.Random, terms: int = 4, height: int = 5) -> XPoly:
    out = {}
    for _ in range(terms):
        deg = rng.randint(0, degree)
        m = [0] * d
        for _ in range(deg):
            m[rng.randrange(d)] += 1
        out[tuple(m)] = Fraction(rng.randint(-height, height), rng.randint(1, height))
    return XPoly(d, out)


def random_field(d: int, degree: int, rng: random.Random, terms: int = 4) -> PolyField:
    while True:
        u = PolyField(random_xpoly(d, degree, rng, terms), random_xpoly(d, degree, rng, terms))
        if not u.is_zero():
            return u


def corpus(d: int, count: int, degree: int = 6, seed: int = 42, terms: int = 4) -> list[PolyField]:
    rng = random.Random(seed)
    return [random_field(d, degree, rng, terms) for _ in range(count)]


def norm_equivalence_probe(u: PolyField, k: int = 5) -> Fraction:
    """Ratio of the adapted norm to the standard H^k x H^{k-1} norm (both squared)."""
    if u.is_zero():
        raise ZeroDivisionError("norm ratio undefined for the zero field")
    return hk_norm_sq(u, k) / standard_norm_sq(u, k)


@dataclass
class CorpusReport:
    d: int
    k: int
    count: int
    max_gap: Fraction
    ratio_range: tuple[Fraction, Fraction]
    failures: list[int]
    exploratory: bool

    def to_json(self) -> dict:
        return {
            "d": self.d, "k": self.k, "corpus": self.count,
            "max-gap": str(self.max_gap), "max-gap-float": float(self.max_gap),
            "ratio-range": [float(self.ratio_range[0]), float(self.ratio_range[1])],
            "failures": self.failures, "exploratory": self.exploratory,
        }


def check_corpus(fields: list[PolyField], k: int = 5) -> CorpusReport:
    gaps, ratios, failures = [], [], []
    for idx, u in enumerate(fields):
        g = dissipativity_gap(u, k)
        gaps.append(g.gap)
        ratios.append(norm_equivalence_probe(u, k))
        if not g.holds:
            failures.append(idx)
    d = fields[0].d
    return CorpusReport(d, k, len(fields), max(gaps), (min(ratios), max(ratios)), failures,
                        d not in VERIFIED_DIMS or k not in VERIFIED_K)


def parse_field(d: int, spec: str) -> XPoly:
    """Parse a sum of terms like ``3/2*x1^2*x3 - x2`` into an XPoly."""
    out = XPoly(d)
    s = spec.replace(" ", "").replace("-", "+-")
    for term in filter(None, s.split("+")):
        coef, mono = Fraction(1), [0] * d
        for factor in term.split("*"):
            neg = factor.startswith("-")
            factor = factor.lstrip("-")
            if neg:
                coef = -coef
            if factor.startswith("x"):
                name, _, power = factor.partition("^")
                mono[int(name[1:]) - 1] += int(power or 1)
            elif factor:
                coef *= Fraction(factor)
        out = out + XPoly(d, {tuple(mono): coef})
    return out


__all__ = [
    "BALL", "SPHERE", "CorpusReport", "GapResult", "PolyField", "XPoly",
    "check_corpus", "corpus", "derivative_pairing", "dissipativity_gap", "euler_identity_defect",
    "free_operator", "hk_inner", "hk_norm_sq", "inner_part", "integrate", "l2", "monomial_moment",
    "norm_equivalence_probe", "parse_field", "random_field", "random_xpoly", "standard_norm_sq",
]
