from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from blowup_lab.exact import (
    Poly,
    certify_nonneg,
    gaussian_eval,
    modulus_square_split,
    poly_vars,
    routh_hurwitz,
    sturm_count,
    u_divmod,
)
from blowup_lab.series import frobenius_coeffs, ratio_defect_terms

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


# ---------------------------------------------------------------------------
# Routh-Hurwitz

def test_routh_stable_linear():
    assert routh_hurwitz([1, 1])


def test_routh_unstable_quadratic():
    assert not routh_hurwitz([-1, 0, 1])


def test_routh_root_at_origin_is_not_stable():
    assert not routh_hurwitz([0, 1, 1])


def test_routh_zero_polynomial_rejected():
    with pytest.raises(ValueError):
        routh_hurwitz([0, 0])


def test_routh_accepts_poly_input():
    (lam,) = poly_vars("lam")
    assert routh_hurwitz((lam + 1) * (lam + 2) * (lam * lam + lam + 1))


def _ratio_start_denominator():
    led = frobenius_coeffs(0, None, N=7)
    a6 = led.a[6].univariate("lam")
    q, r = u_divmod(a6, led.removed_factor)
    assert not r
    return q


def test_routh_on_degree_ten_ratio_denominator():
    den = _ratio_start_denominator()
    assert len(den) - 1 == 10
    roots = np.roots([float(c) for c in reversed(den)])
    assert np.all(roots.real < 0)
    assert routh_hurwitz(den)


@st.composite
def separated_roots(draw):
    """Real polynomial (ascending coefficients) from roots off the imaginary axis."""
    n_real = draw(st.integers(0, 4))
    n_pair = draw(st.integers(0, 2))
    assume(n_real + n_pair > 0)
    away = st.floats(1e-3, 5).flatmap(lambda x: st.sampled_from([x, -x]))
    roots = [draw(away) for _ in range(n_real)]
    for _ in range(n_pair):
        re, im = draw(away), draw(st.floats(0.1, 5))
        roots += [complex(re, im), complex(re, -im)]
    # rationalize the real coefficients; perturbation stays far below the 1e-3 margin
    coeffs = np.real(np.poly(roots))[::-1]
    exact = [Fraction(float(c)).limit_denominator(10**12) for c in coeffs]
    return exact, roots


@given(separated_roots())
def test_routh_agrees_with_companion_roots(case):
    coeffs, _ = case
    roots = np.roots([float(c) for c in reversed(coeffs)])
    assume(np.min(np.abs(roots.real)) > 5e-4)
    assert routh_hurwitz(coeffs) == bool(np.all(roots.real < 0))


# ---------------------------------------------------------------------------
# modulus splitting

def test_split_of_lambda():
    (lam,) = poly_vars("lam")
    (s,) = poly_vars("s")
    assert modulus_square_split(lam) == s


def test_split_of_lambda_plus_one():
    (lam,) = poly_vars("lam")
    (s,) = poly_vars("s")
    assert modulus_square_split(lam + 1) == s + 1


def test_split_of_recurrence_numerator_at_origin():
    n, lam = poly_vars("n", "lam")
    P = 7 * lam * (lam + 9) + 8 * n * n + 4 * (7 * lam + 34) * n - 40
    Q = modulus_square_split(P)
    assert Q.vars == ("n", "s")
    assert Q(n=0, s=0) == 1600


@st.composite
def poly_in_n_lam(draw):
    terms = draw(st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 5)), fractions, min_size=1, max_size=8))
    return Poly(("n", "lam"), terms)


@given(poly_in_n_lam(), fractions, fractions)
def test_split_matches_gaussian_modulus(P, n, t):
    Q = modulus_square_split(P)
    re, im = gaussian_eval(P, "lam", t, n=n)
    assert Q.partial(n=n, s=t * t).constant_term() == re * re + im * im


@given(poly_in_n_lam(), fractions, st.fractions(0, 50, max_denominator=7))
def test_split_is_nonnegative(P, n, s):
    assert modulus_square_split(P).partial(n=n, s=s).constant_term() >= 0


# ---------------------------------------------------------------------------
# nonnegativity certificates

def test_certify_manifestly_positive():
    n, s = poly_vars("n", "s")
    rep = certify_nonneg(n * n + 3 * s)
    assert rep.passed
    assert rep.tactic == "coefficient-nonnegativity"


def test_certify_reports_root_witness():
    (s,) = poly_vars("s")
    rep = certify_nonneg(s - 1)
    assert not rep.passed
    assert rep.tactic == "sturm-on-halfline"
    assert rep.root_witnesses == [(Fraction(1), Fraction(1))]


def test_certify_sturm_fallback_passes_shifted_square():
    (s,) = poly_vars("s")
    rep = certify_nonneg((s - 2) * (s - 2) + 1)
    assert rep.passed
    assert rep.tactic == "sturm-on-halfline"


def test_certify_shift_moves_the_domain():
    (n,) = poly_vars("n")
    assert not certify_nonneg(n - 3).passed
    assert certify_nonneg(n - 3, 3).passed


def test_certify_bounded_ratio_of_constant_profile_defect():
    # |C_n(0, i t)| <= (50(n+6) - 161)/(70(n+6)) for n >= 0, squared and cleared of denominators
    terms = ratio_defect_terms(0)
    Q1 = modulus_square_split(terms.C.num.shift("n", 6))
    Q2 = modulus_square_split(terms.C.den.shift("n", 6))
    (n,) = poly_vars("n")
    G = (50 * n + 139) * (50 * n + 139) * Q2 - (70 * (n + 6)) * (70 * (n + 6)) * Q1
    rep = certify_nonneg(G)
    assert rep.passed
    assert rep.tactic == "coefficient-nonnegativity"
    assert rep.polynomial is not None


@given(st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)),
                       st.fractions(-5, 5, max_denominator=5), min_size=1, max_size=6))
def test_certificate_pass_implies_sampled_nonnegativity(terms):
    p = Poly(("n", "s"), terms)
    rep = certify_nonneg(p, 2)
    if not rep.passed:
        return
    ns = np.linspace(2, 22, 50)
    ss = np.linspace(0, 100, 50)
    N, S = np.meshgrid(ns, ss)
    vals = sum((float(c) * N ** e[0] * S ** e[1] for e, c in p.terms.items()), np.zeros_like(N))
    assert vals.min() >= -1e-12


# ---------------------------------------------------------------------------
# Sturm counting

def test_sturm_one_positive_root():
    assert sturm_count([-2, 0, 1]) == 1


def test_sturm_no_real_roots():
    assert sturm_count([1, 0, 1]) == 0


def test_sturm_counts_distinct_roots_of_nonsquarefree_input():
    # (s - 1)^2 (s - 3)
    assert sturm_count([-3, 7, -5, 1]) == 2


def test_sturm_empty_interval():
    assert sturm_count([-2, 0, 1], 3, 1) == 0


def test_sturm_half_open_interval():
    # roots 1 and 2; [1, 2) holds only the first
    assert sturm_count([2, -3, 1], 1, 2) == 1


@given(st.lists(fractions, min_size=2, max_size=7), st.fractions(1, 100, max_denominator=9))
def test_sturm_scale_invariance(coeffs, c):
    assume(any(coeffs[1:]))
    assert sturm_count(coeffs) == sturm_count([c * x for x in coeffs])


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=5, unique=True))
def test_sturm_counts_integer_roots(roots):
    assert sturm_count(_from_roots(roots)) == sum(1 for r in roots if r >= 0)


def _from_roots(roots):
    p = [Fraction(1)]
    for r in roots:
        shifted = [Fraction(0)] + p
        scaled = [-r * c for c in p] + [Fraction(0)]
        p = [a + b for a, b in zip(shifted, scaled)]
    return p
