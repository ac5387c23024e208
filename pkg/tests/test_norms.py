import random
from fractions import Fraction
from itertools import product

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from blowup_lab.norms import (
    BALL,
    SPHERE,
    PolyField,
    XPoly,
    check_corpus,
    corpus,
    derivative_pairing,
    dissipativity_gap,
    euler_identity_defect,
    free_operator,
    hk_inner,
    hk_norm_sq,
    l2,
    monomial_moment,
    norm_equivalence_probe,
    parse_field,
    random_field,
    random_xpoly,
    standard_norm_sq,
)

F = Fraction


# ---------------------------------------------------------------------------
# independent oracle: Gamma-function moments and full index-tensor contractions

def _gamma_moment(domain, d, alpha):
    if any(a % 2 for a in alpha):
        return sp.Integer(0)
    s = 2 * sp.Mul(*[sp.gamma(sp.Rational(a + 1, 2)) for a in alpha]) / sp.gamma(sp.Rational(sum(alpha) + d, 2))
    area = 2 * sp.pi ** sp.Rational(d, 2) / sp.gamma(sp.Rational(d, 2))
    val = sp.nsimplify(sp.simplify(s / area))
    return val if domain == SPHERE else val / (sum(alpha) + d)


def _to_sym(p: XPoly, xs):
    return sum((sp.Rational(c.numerator, c.denominator) * sp.Mul(*[x ** e for x, e in zip(xs, m)])
                for m, c in p.terms.items()), sp.Integer(0))


def _sym_integral(expr, xs, domain):
    poly = sp.Poly(sp.expand(expr), *xs)
    return sum((c * _gamma_moment(domain, len(xs), m) for m, c in poly.terms()), sp.Integer(0))


def _sym_pairing(u, v, order, xs, domain):
    total = sp.Integer(0)
    for idx in product(range(len(xs)), repeat=order):
        du, dv = u, v
        for i in idx:
            du, dv = sp.diff(du, xs[i]), sp.diff(dv, xs[i])
        total += _sym_integral(du * dv, xs, domain)
    return total


def _sym_hk_inner(u, v, k, xs):
    lap = lambda f: sum(sp.diff(f, x, 2) for x in xs)
    P = lambda a, b, n, dom: _sym_pairing(a, b, n, xs, dom)
    (u1, u2), (v1, v2) = u, v
    total = P(u1, v1, 1, SPHERE) + P(u1, v1, 0, SPHERE) + P(u2, v2, 0, SPHERE)
    total += P(lap(u1), lap(v1), 1, BALL) + P(u2, v2, 2, BALL) + P(u2, v2, 1, SPHERE)
    total += 4 * (P(u1, v1, 3, BALL) + P(u2, v2, 2, BALL) + P(u1, v1, 2, SPHERE))
    for j in range(4, k + 1):
        total += P(u1, v1, j, BALL) + P(u2, v2, j - 1, BALL)
    return total


# ---------------------------------------------------------------------------
# moments

def test_sphere_moment_of_constant():
    assert monomial_moment(SPHERE, 9, [0] * 9) == 1


def test_sphere_second_moment():
    assert monomial_moment(SPHERE, 9, [2] + [0] * 8) == F(1, 9)


def test_ball_volume_in_sphere_units():
    assert monomial_moment(BALL, 9, [0] * 9) == F(1, 9)


def test_odd_moment_vanishes():
    assert monomial_moment(BALL, 5, [3, 1, 0, 0, 0]) == 0


@pytest.mark.parametrize("d, alpha", [(3, (2, 2, 0)), (4, (4, 0, 2, 2)), (9, (2, 4, 0, 0, 0, 0, 2, 0, 0)),
                                      (7, (6, 0, 0, 0, 0, 0, 2))])
@pytest.mark.parametrize("domain", [SPHERE, BALL])
def test_moment_against_gamma_formula(domain, d, alpha):
    expected = _gamma_moment(domain, d, alpha)
    got = monomial_moment(domain, d, alpha)
    assert sp.Rational(got.numerator, got.denominator) == expected


def test_moment_guards():
    with pytest.raises(ValueError):
        monomial_moment(SPHERE, 3, [0, 0])
    with pytest.raises(ValueError):
        monomial_moment("cube", 3, [0, 0, 0])
    with pytest.raises(ValueError):
        monomial_moment(SPHERE, 1, [0])


# ---------------------------------------------------------------------------
# derivative pairings and the adapted inner product against the brute-force oracle

XS = sp.symbols("x1:4")


@pytest.mark.parametrize("order", [0, 1, 2, 3])
@pytest.mark.parametrize("domain", [SPHERE, BALL])
def test_derivative_pairing_against_index_tensor(order, domain):
    rng = random.Random(order * 7 + len(domain))
    u, v = random_xpoly(3, 5, rng), random_xpoly(3, 5, rng)
    got = derivative_pairing(u, v, order, domain)
    assert sp.Rational(got.numerator, got.denominator) == _sym_pairing(_to_sym(u, XS), _to_sym(v, XS), order, XS, domain)


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_adapted_inner_product_against_index_tensor(seed):
    rng = random.Random(seed)
    u, v = random_field(3, 5, rng, terms=3), random_field(3, 5, rng, terms=3)
    got = hk_inner(u, v, 5)
    expected = _sym_hk_inner((_to_sym(u.u1, XS), _to_sym(u.u2, XS)), (_to_sym(v.u1, XS), _to_sym(v.u2, XS)), 5, XS)
    assert sp.Rational(got.numerator, got.denominator) == expected


@given(st.integers(0, 10**6))
def test_adapted_inner_product_is_symmetric(seed):
    rng = random.Random(seed)
    u, v = random_field(5, 4, rng, terms=3), random_field(5, 4, rng, terms=3)
    assert hk_inner(u, v, 4) == hk_inner(v, u, 4)


def test_inner_product_guards():
    u = PolyField(XPoly.const(3, 1), XPoly(3))
    with pytest.raises(ValueError):
        hk_inner(u, u, 2)
    with pytest.raises(ValueError):
        hk_inner(u, PolyField(XPoly.const(4, 1), XPoly(4)), 4)


def test_norm_of_constant_first_component():
    assert hk_norm_sq(PolyField(XPoly.const(9, 1), XPoly(9)), 5) == 1


def test_norm_of_linear_first_component():
    assert hk_norm_sq(PolyField(XPoly.coord(9, 0), XPoly(9)), 5) == F(10, 9)


# ---------------------------------------------------------------------------
# dissipativity

def test_free_operator_on_constant():
    Lu = free_operator(PolyField(XPoly.const(9, 1), XPoly(9)))
    assert Lu.u1 == XPoly.const(9, -2) and not Lu.u2


def test_gap_of_constant_first_component():
    g = dissipativity_gap(PolyField(XPoly.const(9, 1), XPoly(9)))
    assert g.gap == F(-3, 2)
    assert g.holds and not g.exploratory


def test_gap_of_constant_second_component():
    # L(0, 1) = (1, -3): pairing -3 against unit norm
    g = dissipativity_gap(PolyField(XPoly(9), XPoly.const(9, 1)))
    assert g.pairing == -3 and g.norm_sq == 1
    assert g.gap == F(-5, 2)


def test_gap_against_oracle_for_quadratic_field():
    rng = random.Random(5)
    u = random_field(3, 4, rng, terms=3)
    Lu = free_operator(u)
    sym = lambda w: (_to_sym(w.u1, XS), _to_sym(w.u2, XS))
    expected = _sym_hk_inner(sym(Lu), sym(u), 5, XS) + sp.Rational(1, 2) * _sym_hk_inner(sym(u), sym(u), 5, XS)
    g = dissipativity_gap(u)
    assert g.exploratory
    assert sp.Rational(g.gap.numerator, g.gap.denominator) == expected


def test_free_operator_against_symbolic_definition():
    rng = random.Random(9)
    u = random_field(3, 4, rng)
    u1, u2 = _to_sym(u.u1, XS), _to_sym(u.u2, XS)
    D = lambda f: sum(x * sp.diff(f, x) for x in XS)
    lap = sum(sp.diff(u1, x, 2) for x in XS)
    Lu = free_operator(u)
    assert sp.expand(_to_sym(Lu.u1, XS) - (-D(u1) - 2 * u1 + u2)) == 0
    assert sp.expand(_to_sym(Lu.u2, XS) - (lap - D(u2) - 3 * u2)) == 0


@pytest.mark.parametrize("d, count", [(9, 100), (7, 40)])
def test_gap_nonpositive_on_random_corpus(d, count):
    rep = check_corpus(corpus(d, count, seed=d))
    assert rep.failures == []
    assert rep.max_gap <= 0
    assert not rep.exploratory


def test_seven_dimensional_constant():
    assert dissipativity_gap(PolyField(XPoly.const(7, 1), XPoly(7))).constant == F(3, 2)


# ---------------------------------------------------------------------------
# identities and equivalence

@given(st.integers(0, 10**6), st.sampled_from([3, 7, 9]))
def test_euler_identity(seed, d):
    assert euler_identity_defect(random_xpoly(d, 5, random.Random(seed))) == 0


def test_euler_identity_detects_a_wrong_weight():
    f = XPoly.coord(9, 0)
    wrong = 2 * l2(f.euler(), f, BALL) - l2(f, f, SPHERE) + 8 * l2(f, f, BALL)
    assert wrong != 0 and euler_identity_defect(f) == 0


def test_norm_equivalence_ratio():
    u = PolyField(parse_field(9, "x1*x2"), parse_field(9, "x3"))
    ratio = norm_equivalence_probe(u)
    assert ratio == hk_norm_sq(u, 5) / standard_norm_sq(u, 5)
    assert 0 < ratio < 100


def test_norm_equivalence_rejects_zero_field():
    with pytest.raises(ZeroDivisionError):
        norm_equivalence_probe(PolyField(XPoly(9), XPoly(9)))


def test_parse_field():
    p = parse_field(3, "3/2*x1^2*x3 - x2 + 4")
    assert p.terms == {(2, 0, 1): F(3, 2), (0, 1, 0): F(-1), (0, 0, 0): F(4)}
