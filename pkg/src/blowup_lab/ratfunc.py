"""Quotients of exact polynomials.

Multivariate quotients are kept unreduced (common factors never change the
modulus bounds or pole locations that the certificates inspect).  Univariate
quotients are reduced by the Euclidean gcd.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import Poly, u_divmod, u_gcd


@dataclass(frozen=True)
class RatFunc:
    num: Poly
    den: Poly

    @classmethod
    def of(cls, p: Poly | int | Fraction, vars=()) -> RatFunc:
        if not isinstance(p, Poly):
            p = Poly.const(p, vars)
        return cls(p, Poly.const(1, p.vars))

    def __post_init__(self):
        if not self.den:
            raise ZeroDivisionError("rational function with zero denominator")

    def _lift(self, other) -> RatFunc:
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (Poly, int, Fraction)):
            return RatFunc.of(other, self.num.vars)
        return NotImplemented

    def __add__(self, other) -> RatFunc:
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den).reduced()
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den).reduced()

    __radd__ = __add__

    def __neg__(self) -> RatFunc:
        return RatFunc(-self.num, self.den)

    def __sub__(self, other) -> RatFunc:
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other) -> RatFunc:
        return (-self) + other

    def __mul__(self, other) -> RatFunc:
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return RatFunc(self.num * o.num, self.den * o.den).reduced()

    __rmul__ = __mul__

    def __truediv__(self, other) -> RatFunc:
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if not o.num:
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num).reduced()

    def __rtruediv__(self, other) -> RatFunc:
        return self._lift(other) / self

    def __pow__(self, k: int) -> RatFunc:
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (1 / self) ** (-k)
        out = RatFunc.of(1, self.num.vars)
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self.num

    def reduced(self) -> RatFunc:
        """Cancel the gcd for univariate data and normalize the leading sign/scale."""
        num, den = self.num._unify(self.den)
        if not num:
            return RatFunc(Poly.const(0, num.vars), Poly.const(1, num.vars))
        used = set(num.used_vars()) | set(den.used_vars())
        if len(used) == 1:
            (v,) = used
            a, b = num.univariate(v), den.univariate(v)
            g = u_gcd(a, b)
            if len(g) > 1:
                a = u_divmod(a, g)[0]
                b = u_divmod(b, g)[0]
            lead = b[-1]
            vs = num.vars
            num = Poly.from_univariate([c / lead for c in a], v).with_vars(vs)
            den = Poly.from_univariate([c / lead for c in b], v).with_vars(vs)
            return RatFunc(num, den)
        if den.is_constant():
            c = den.constant_term()
            return RatFunc(num * (1 / c), Poly.const(1, num.vars))
        return RatFunc(num, den)

    def __call__(self, **values):
        return self.num(**values) / self.den(**values)

    def partial(self, **values) -> RatFunc:
        return RatFunc(self.num.partial(**values), self.den.partial(**values)).reduced()

    def shift(self, name: str, by) -> RatFunc:
        return RatFunc(self.num.shift(name, by), self.den.shift(name, by))

    def degree(self, name: str) -> tuple[int, int]:
        return self.num.degree(name), self.den.degree(name)
