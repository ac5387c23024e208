"""Exact rational polynomials and the positivity certificates built on them.

Coefficients are :class:`fractions.Fraction`.  Multivariate polynomials are
sparse maps from exponent tuples to coefficients; univariate work (gcd, Sturm
chains, Routh tables) uses dense coefficient lists, lowest degree first.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

Number = int | Fraction

# Canonical variable order: certificate polynomials serialize deterministically.
_VAR_RANK = {"n": 0, "l": 1, "s": 2, "lam": 3, "t": 4}


def _var_key(name: str) -> tuple[int, str]:
    return (_VAR_RANK.get(name, len(_VAR_RANK)), name)


def _frac(c: Number) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class Poly:
    """Sparse multivariate polynomial with rational coefficients.

    ``vars`` is an ordered tuple of names; ``terms`` maps exponent tuples of
    that arity to nonzero Fractions.  Instances are treated as immutable.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, vars: Sequence[str], terms: Mapping[tuple[int, ...], Number] | None = None):
        self.vars = tuple(vars)
        clean: dict[tuple[int, ...], Fraction] = {}
        for e, c in (terms or {}).items():
            if len(e) != len(self.vars):
                raise ValueError(f"exponent {e} does not match variables {self.vars}")
            if c:
                clean[tuple(e)] = _frac(c)
        self.terms = clean

    # construction -----------------------------------------------------
    @classmethod
    def var(cls, name: str, vars: Sequence[str] | None = None) -> Poly:
        vars = tuple(vars) if vars is not None else (name,)
        e = tuple(1 if v == name else 0 for v in vars)
        return cls(vars, {e: 1})

    @classmethod
    def const(cls, c: Number, vars: Sequence[str] = ()) -> Poly:
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def from_univariate(cls, coeffs: Sequence[Number], name: str) -> Poly:
        return cls((name,), {(k,): c for k, c in enumerate(coeffs)})

    @classmethod
    def _raw(cls, vars: tuple[str, ...], terms: dict[tuple[int, ...], Fraction]) -> Poly:
        p = object.__new__(cls)
        p.vars = vars
        p.terms = terms
        return p

    # variable bookkeeping ---------------------------------------------
    def with_vars(self, vars: Sequence[str]) -> Poly:
        vars = tuple(vars)
        if vars == self.vars:
            return self
        missing = [v for v in self.vars if v not in vars]
        for v in missing:
            if self.degree(v) > 0:
                raise ValueError(f"cannot drop variable {v!r} that occurs in the polynomial")
        idx = [self.vars.index(v) if v in self.vars else None for v in vars]
        out = {}
        for e, c in self.terms.items():
            out[tuple(e[i] if i is not None else 0 for i in idx)] = c
        return Poly._raw(vars, out)

    def _unify(self, other: Poly) -> tuple[Poly, Poly]:
        if self.vars == other.vars:
            return self, other
        vs = tuple(sorted(set(self.vars) | set(other.vars), key=_var_key))
        return self.with_vars(vs), other.with_vars(vs)

    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other, self.vars)
        return NotImplemented

    # arithmetic -------------------------------------------------------
    def __add__(self, other) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._unify(other)
        out = dict(a.terms)
        for e, c in b.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly._raw(a.vars, out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> Poly:
        return (-self) + other

    def __mul__(self, other) -> Poly:
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly._raw(self.vars, {})
            return Poly._raw(self.vars, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._unify(other)
        out: dict[tuple[int, ...], Fraction] = {}
        bt = list(b.terms.items())
        for ea, ca in a.terms.items():
            for eb, cb in bt:
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        return Poly._raw(a.vars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> Poly:
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        inv = 1 / _frac(other)
        return self * inv

    def __pow__(self, k: int) -> Poly:
        if k < 0:
            raise ValueError("negative power")
        result = Poly.const(1, self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        other = self._coerce(other) if not isinstance(other, Poly) else other
        if other is NotImplemented:
            return NotImplemented
        a, b = self._unify(other)
        return a.terms == b.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "Poly(0)"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"{v}^{k}" if k > 1 else v for v, k in zip(self.vars, e) if k)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return "Poly(" + " + ".join(parts) + ")"

    # queries ------------------------------------------------------------
    def degree(self, name: str) -> int:
        if not self.terms:
            return -1
        if name not in self.vars:
            return 0
        i = self.vars.index(name)
        return max(e[i] for e in self.terms)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def used_vars(self) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.vars) if any(e[i] for e in self.terms))

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def negative_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        return sorted((e, c) for e, c in self.terms.items() if c < 0)

    # evaluation and substitution ---------------------------------------
    def __call__(self, **values):
        """Evaluate at numbers given by keyword; unspecified variables must be absent."""
        total = 0
        for e, c in self.terms.items():
            term = c
            for v, k in zip(self.vars, e):
                if k:
                    term = term * values[v] ** k
            total = total + term
        return total

    def partial(self, **values) -> Poly:
        """Substitute numbers for some variables, keeping the rest symbolic."""
        keep = [i for i, v in enumerate(self.vars) if v not in values]
        vs = tuple(self.vars[i] for i in keep)
        out: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms.items():
            term = c
            for i, v in enumerate(self.vars):
                if v in values and e[i]:
                    term = term * _frac(values[v]) ** e[i]
            key = tuple(e[i] for i in keep)
            out[key] = out.get(key, 0) + term
        return Poly._raw(vs, {e: c for e, c in out.items() if c})

    def shift(self, name: str, by: Number) -> Poly:
        """Return p with ``name`` replaced by ``name + by``."""
        if name not in self.vars or not by:
            return self
        i = self.vars.index(name)
        by = _frac(by)
        powers = [Fraction(1)]
        for _ in range(self.degree(name)):
            powers.append(powers[-1] * by)
        out: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms.items():
            k = e[i]
            for j in range(k + 1):
                coeff = c * comb(k, j) * powers[k - j]
                if not coeff:
                    continue
                ne = e[:i] + (j,) + e[i + 1:]
                out[ne] = out.get(ne, 0) + coeff
        return Poly._raw(self.vars, {e: c for e, c in out.items() if c})

    def substitute(self, name: str, value: Poly) -> Poly:
        """Replace variable ``name`` by a polynomial."""
        if name not in self.vars:
            return self
        i = self.vars.index(name)
        rest = self.vars[:i] + self.vars[i + 1:]
        by_power: dict[int, dict] = {}
        for e, c in self.terms.items():
            by_power.setdefault(e[i], {})[e[:i] + e[i + 1:]] = c
        result = Poly((), {}) if not rest else Poly(rest, {})
        vpow = Poly.const(1, value.vars)
        for k in range(max(by_power, default=-1) + 1):
            if k in by_power:
                result = result + Poly._raw(rest, by_power[k]) * vpow
            vpow = vpow * value
        return result

    def diff(self, name: str) -> Poly:
        if name not in self.vars:
            return Poly._raw(self.vars, {})
        i = self.vars.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                out[e[:i] + (e[i] - 1,) + e[i + 1:]] = c * e[i]
        return Poly._raw(self.vars, out)

    def coefficients_in(self, name: str) -> list[Poly]:
        """Coefficient polynomials (in the remaining variables) of each power of ``name``."""
        i = self.vars.index(name)
        rest = self.vars[:i] + self.vars[i + 1:]
        buckets: dict[int, dict] = {}
        for e, c in self.terms.items():
            buckets.setdefault(e[i], {})[e[:i] + e[i + 1:]] = c
        deg = max(buckets, default=-1)
        return [Poly._raw(rest, buckets.get(k, {})) for k in range(deg + 1)]

    def univariate(self, name: str | None = None) -> list[Fraction]:
        """Dense coefficients (low to high) when only one variable occurs."""
        used = self.used_vars()
        if name is None:
            if len(used) > 1:
                raise ValueError(f"polynomial is not univariate: {used}")
            name = used[0] if used else (self.vars[0] if self.vars else "x")
        elif any(v != name for v in used):
            raise ValueError(f"polynomial depends on variables other than {name!r}")
        if not self.terms:
            return []
        if name not in self.vars:
            return [self.constant_term()]
        i = self.vars.index(name)
        out = [Fraction(0)] * (self.degree(name) + 1)
        for e, c in self.terms.items():
            out[e[i]] = c
        return out

    def serialize(self) -> list[list]:
        """Deterministic sparse listing ``[[exponents], num, den]``."""
        return [[list(e), c.numerator, c.denominator] for e, c in sorted(self.terms.items())]


def poly_vars(*names: str) -> tuple[Poly, ...]:
    vs = tuple(sorted(names, key=_var_key))
    return tuple(Poly.var(n, vs) for n in names)


# ---------------------------------------------------------------------------
# dense univariate helpers (coefficient lists, lowest degree first)

UPoly = list[Fraction]


def u_trim(p: Sequence[Number]) -> UPoly:
    p = [_frac(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def u_deg(p: Sequence[Number]) -> int:
    return len(u_trim(p)) - 1


def u_add(p: Sequence[Number], q: Sequence[Number]) -> UPoly:
    n = max(len(p), len(q))
    return u_trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def u_sub(p: Sequence[Number], q: Sequence[Number]) -> UPoly:
    return u_add(p, [-c for c in q])


def u_scale(p: Sequence[Number], c: Number) -> UPoly:
    return u_trim([x * c for x in p])


def u_mul(p: Sequence[Number], q: Sequence[Number]) -> UPoly:
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return u_trim(out)


def u_divmod(p: Sequence[Number], q: Sequence[Number]) -> tuple[UPoly, UPoly]:
    p, q = u_trim(p), u_trim(q)
    if not q:
        raise ZeroDivisionError("division by the zero polynomial")
    if len(p) < len(q):
        return [], p
    r = list(p)
    quot = [Fraction(0)] * (len(p) - len(q) + 1)
    lead = q[-1]
    for k in range(len(p) - len(q), -1, -1):
        c = r[k + len(q) - 1] / lead
        quot[k] = c
        if c:
            for j, b in enumerate(q):
                r[k + j] -= c * b
    return u_trim(quot), u_trim(r[: len(q) - 1])


def u_monic(p: Sequence[Number]) -> UPoly:
    p = u_trim(p)
    return [c / p[-1] for c in p] if p else []


def u_gcd(p: Sequence[Number], q: Sequence[Number]) -> UPoly:
    a, b = u_trim(p), u_trim(q)
    while b:
        a, b = b, u_divmod(a, b)[1]
        b = u_monic(b) if b else b
    return u_monic(a)


def u_deriv(p: Sequence[Number]) -> UPoly:
    return u_trim([k * c for k, c in enumerate(p)][1:])


def u_eval(p: Sequence[Number], x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def u_compose_shift(p: Sequence[Number], a: Number) -> UPoly:
    """Coefficients of p(x + a)."""
    p = u_trim(p)
    out = [Fraction(0)] * len(p)
    a = _frac(a)
    for k, c in enumerate(p):
        for j in range(k + 1):
            out[j] += c * comb(k, j) * a ** (k - j)
    return u_trim(out)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


# ---------------------------------------------------------------------------
# Routh-Hurwitz

def routh_first_column(coeffs_desc: Sequence):
    """First column of the Routh array for a0*x^m + a1*x^(m-1) + ... + am.

    Entries may be any field elements (Fractions, or rational functions of a
    parameter).  Returns ``None`` at the first vanishing pivot, which already
    rules out strict stability.
    """
    row0 = list(coeffs_desc[0::2])
    row1 = list(coeffs_desc[1::2])
    m = len(coeffs_desc) - 1
    col = [row0[0]]
    if m == 0:
        return col
    if not row1 or not row1[0]:
        return None
    col.append(row1[0])
    for _ in range(m - 1):
        nxt = []
        for j in range(len(row0) - 1):
            a = row0[j + 1]
            b = row1[j + 1] if j + 1 < len(row1) else 0
            nxt.append(a - row0[0] * b / row1[0])
        while nxt and not nxt[-1]:
            nxt.pop()
        if not nxt or not nxt[0]:
            return None
        col.append(nxt[0])
        row0, row1 = row1, nxt
    return col


def routh_hurwitz(p: Poly | Sequence[Number]) -> bool:
    """True iff every complex root of the univariate ``p`` has negative real part."""
    coeffs = p.univariate() if isinstance(p, Poly) else u_trim(p)
    coeffs = u_trim(coeffs)
    if not coeffs:
        raise ValueError("zero polynomial")
    if coeffs[0] == 0:
        return False  # root at the origin
    desc = list(reversed(coeffs))
    col = routh_first_column(desc)
    if col is None or len(col) != len(desc):
        return False
    s = _sign(col[0])
    return all(_sign(c) == s for c in col)


# ---------------------------------------------------------------------------
# Sturm sequences

def sturm_chain(p: Sequence[Number]) -> list[UPoly]:
    p = u_trim(p)
    chain = [p, u_deriv(p)]
    while chain[-1]:
        r = u_divmod(chain[-2], chain[-1])[1]
        if not r:
            break
        chain.append([-c for c in r])
    return [c for c in chain if c]


def _variations(values: Iterable[int]) -> int:
    signs = [s for s in values if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _sign_at(chain: list[UPoly], x) -> list[int]:
    if x == float("inf"):
        return [_sign(c[-1]) for c in chain]
    return [_sign(u_eval(c, x)) for c in chain]


def squarefree_part(p: Sequence[Number]) -> UPoly:
    p = u_trim(p)
    g = u_gcd(p, u_deriv(p))
    return u_divmod(p, g)[0] if len(g) > 1 else p


def sturm_count(p: Poly | Sequence[Number], lo: Number = 0, hi: Number | float = float("inf")) -> int:
    """Number of distinct real roots in the half-open interval [lo, hi)."""
    coeffs = p.univariate() if isinstance(p, Poly) else u_trim(p)
    if not coeffs:
        raise ValueError("zero polynomial has infinitely many roots")
    if hi != float("inf") and hi <= lo:
        return 0
    q = squarefree_part(coeffs)
    count = 0
    lo = _frac(lo)
    if u_eval(q, lo) == 0:
        count += 1
        q = u_divmod(q, [-lo, 1])[0]
    if hi != float("inf"):
        hi = _frac(hi)
        if u_eval(q, hi) == 0:
            q = u_divmod(q, [-hi, 1])[0]
    if len(q) <= 1:
        return count
    chain = sturm_chain(q)
    return count + _variations(_sign_at(chain, lo)) - _variations(_sign_at(chain, hi))


def isolate_roots(p: Sequence[Number], lo: Number = 0, hi: Number | float = float("inf"),
                  width: Fraction = Fraction(1, 10**9)) -> list[tuple[Fraction, Fraction]]:
    """Disjoint rational intervals each holding exactly one root of p in [lo, hi)."""
    q = squarefree_part(p)
    lo = _frac(lo)
    if hi == float("inf"):
        # Cauchy bound on the positive roots
        hi = 1 + max(abs(c / q[-1]) for c in q[:-1]) if len(q) > 1 else lo + 1
        hi = max(_frac(hi), lo + 1) + 1
    hi = _frac(hi)
    out = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        k = sturm_count(q, a, b)
        if k == 0:
            continue
        if u_eval(q, a) == 0:
            out.append((a, a))
            if k > 1:
                stack.append((a + (b - a) / 2**40, b))
            continue
        if k == 1 and b - a <= width:
            snap = ((a + b) / 2).limit_denominator(10**6)
            out.append((snap, snap) if a <= snap < b and u_eval(q, snap) == 0 else (a, b))
            continue
        m = (a + b) / 2
        stack.extend([(m, b), (a, m)])
    return sorted(out)


# ---------------------------------------------------------------------------
# imaginary-axis splitting and nonnegativity certificates

def modulus_square_split(p: Poly, var: str = "lam", new: str = "s") -> Poly:
    """Q with Q(..., t^2) = |P(..., i t)|^2 for real-coefficient P."""
    if var not in p.vars:
        return p * p
    coeffs = p.coefficients_in(var)
    rest = tuple(v for v in p.vars if v != var)
    vs = tuple(sorted(set(rest) | {new}, key=_var_key))
    sv = Poly.var(new, vs)
    real = Poly(vs, {})
    imag = Poly(vs, {})
    spow = Poly.const(1, vs)
    for k, c in enumerate(coeffs):
        if k and k % 2 == 0:
            spow = spow * sv
        if not c:
            continue
        sign = -1 if (k // 2) % 2 else 1
        term = c.with_vars(vs) * spow * sign
        if k % 2 == 0:
            real = real + term
        else:
            imag = imag + term
    return real * real + sv * imag * imag


@dataclass
class CertificateReport:
    """Outcome of one positivity certificate."""

    verdict: str
    tactic: str
    shift: dict[str, int]
    polynomial: Poly | None
    offending: list = field(default_factory=list)
    root_witnesses: list = field(default_factory=list)
    terms: int = 0
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "tactic": self.tactic,
            "shifted-index": self.shift,
            "terms": self.terms,
            "elapsed-s": round(self.elapsed, 6),
            "offending": [[list(e), str(c)] for e, c in self.offending[:20]],
            "root-witnesses": [[str(a), str(b)] for a, b in self.root_witnesses],
            "polynomial": self.polynomial.serialize() if self.polynomial is not None else None,
        }


def certify_nonneg(p: Poly, shift: int | Mapping[str, int] = 0, var: str = "n") -> CertificateReport:
    """Certify p >= 0 on [shift, oo) in each shifted variable and [0, oo) in the rest.

    Tactic 1: all coefficients of the shifted expansion are nonnegative.
    Tactic 2 (univariate only): no Sturm roots on (0, oo) and p(0) >= 0,
    with p positive at infinity.
    """
    start = time.perf_counter()
    shifts = dict(shift) if isinstance(shift, Mapping) else ({var: int(shift)} if shift else {})
    q = p
    for name, by in shifts.items():
        q = q.shift(name, by)
    neg = q.negative_terms()
    if not neg:
        return CertificateReport("pass", "coefficient-nonnegativity", shifts, q,
                                 terms=len(q.terms), elapsed=time.perf_counter() - start)
    used = q.used_vars()
    if len(used) == 1:
        coeffs = q.univariate(used[0])
        roots = sturm_count(coeffs, 0) - (1 if coeffs[0] == 0 else 0)
        ok = roots == 0 and coeffs[0] >= 0 and coeffs[-1] > 0
        witnesses = [] if ok else isolate_roots(coeffs, 0)
        if not ok and not witnesses and coeffs[-1] < 0:
            witnesses = [(Fraction(0), Fraction(0))]
        return CertificateReport("pass" if ok else "fail", "sturm-on-halfline", shifts, q,
                                 offending=[] if ok else neg, root_witnesses=witnesses,
                                 terms=len(q.terms), elapsed=time.perf_counter() - start)
    return CertificateReport("fail", "coefficient-nonnegativity", shifts, q, offending=neg,
                             terms=len(q.terms), elapsed=time.perf_counter() - start)


def gaussian_eval(p: Poly, var: str, t: Fraction, **others) -> tuple[Fraction, Fraction]:
    """Exact (re, im) of p at var = i*t with the other variables rational."""
    re = Fraction(0)
    im = Fraction(0)
    fixed = p.partial(**others) if others else p
    for k, c in enumerate(fixed.univariate(var) if fixed.used_vars() else [fixed.constant_term()]):
        val = c * t**k
        r = k % 4
        if r == 0:
            re += val
        elif r == 1:
            im += val
        elif r == 2:
            re -= val
        else:
            im -= val
    return re, im
