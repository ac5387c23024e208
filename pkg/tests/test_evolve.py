import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from blowup_lab.evolve import (
    ConditioningError,
    DivergenceError,
    RadialStatePair,
    even_polynomial,
    evolve,
    fit_rate,
    fornberg_weights,
    linear_operator,
    make_grid,
    mode_amplitudes,
    mode_basis,
    projector,
    rhs,
    static_pair,
    tune,
    upsilon_data,
)


def _bump(eps):
    return lambda r: eps * np.exp(-4 * r * r)


def _gauss_laplacian(r, d):
    f = np.exp(-r ** 2)
    return (4 * r ** 2 - 2 * d) * f


def _order(e_coarse, e_fine):
    return math.log2(e_coarse / e_fine)


# ---------------------------------------------------------------------------
# grids

def test_fornberg_central_second_derivative_stencil():
    w = fornberg_weights(0.0, np.arange(-2.0, 3.0), 2)
    assert np.allclose(w[2], [-1 / 12, 4 / 3, -5 / 2, 4 / 3, -1 / 12], atol=1e-13)
    assert np.allclose(w[1], [1 / 12, -2 / 3, 0, 2 / 3, -1 / 12], atol=1e-13)


def test_grid_kind_rejected():
    with pytest.raises(ValueError):
        make_grid(10, 9, "spline")


def test_fd_grid_keeps_origin_off_grid_and_ends_on_boundary():
    g = make_grid(50, 9)
    assert g.rho[0] > 0
    assert g.rho[-1] == pytest.approx(1.0, abs=1e-14)


def test_finite_difference_convergence_orders():
    errs = {}
    for n in (100, 200):
        g = make_grid(n, 9)
        r = g.rho
        f = np.exp(-r ** 2)
        e = np.abs(g.laplacian(f) - _gauss_laplacian(r, 9))
        errs[n] = (np.max(np.abs(g.D1 @ f + 2 * r * f)), e[:-3].max(), e[-1])
    first, interior, boundary = (_order(a, b) for a, b in zip(errs[100], errs[200]))
    assert first > 3.7
    assert interior > 3.7
    # the one-sided closure of the second derivative is third order at rho = 1
    assert boundary > 2.5


def test_chebyshev_laplacian_is_spectrally_accurate():
    g = make_grid(24, 9, "chebyshev")
    assert np.max(np.abs(g.laplacian(np.exp(-g.rho ** 2)) - _gauss_laplacian(g.rho, 9))) < 1e-9


def test_weights_integrate_radial_moment():
    g = make_grid(400, 9)
    # int_0^1 rho^{d-1} rho^2 d rho on a grid starting at h/2
    assert g.weights() @ g.rho ** 2 == pytest.approx(1 / 11, rel=1e-4)


# ---------------------------------------------------------------------------
# data

def test_upsilon_at_unit_time_is_static_pair():
    g = make_grid(40, 9)
    st0 = upsilon_data("u-star", 9, g)
    s1, s2 = static_pair("u-star", 9, g.rho)
    assert np.array_equal(st0.psi1, s1) and np.array_equal(st0.psi2, s2)


def test_constant_family_static_pair():
    s1, s2 = static_pair("kappa", 9, np.linspace(0, 1, 5))
    assert np.all(s1 == 6) and np.all(s2 == 12)


def test_upsilon_guards():
    g = make_grid(20, 9)
    with pytest.raises(ValueError):
        upsilon_data("u-star", 9, g, T=1.6)
    with pytest.raises(ValueError):
        upsilon_data("kappa", 9, g, alpha=0.1)
    with pytest.raises(ValueError):
        upsilon_data("other", 9, g)


def test_blowup_time_shift_direction():
    # d/dT (T^2 U(T rho), T^3 W(T rho)) at T = 1 is (2U + rho U', 3W + rho W')
    g = make_grid(200, 9)
    r, eta = g.rho, 1e-2
    U, W = static_pair("u-star", 9, r)
    dU = np.gradient(U, r, edge_order=2)
    dW = np.gradient(W, r, edge_order=2)
    p1, p2 = upsilon_data("u-star", 9, g, T=1 + eta).perturbation()
    assert np.max(np.abs(p1 / eta - (2 * U + r * dU))) < 0.05 * np.max(np.abs(U))
    assert np.max(np.abs(p2 / eta - (3 * W + r * dW))) < 0.05 * np.max(np.abs(W))


def test_even_polynomial():
    f = even_polynomial([1, -2, 3])
    r = np.array([0.0, 0.5, 1.0])
    assert np.allclose(f(r), 1 - 2 * r ** 2 + 3 * r ** 4)
    assert even_polynomial([2])(r).shape == r.shape


# ---------------------------------------------------------------------------
# right-hand side

@pytest.mark.parametrize("family", ["u-star", "kappa"])
def test_static_pairs_are_stationary(family):
    g = make_grid(24, 9, "chebyshev")
    r1, r2 = rhs(upsilon_data(family, 9, g), g)
    assert max(np.max(np.abs(r1)), np.max(np.abs(r2))) < 1e-8


def test_static_residual_converges_on_fd_grid():
    res = []
    for n in (100, 200):
        g = make_grid(n, 9)
        r1, r2 = rhs(upsilon_data("u-star", 9, g), g)
        res.append(max(np.max(np.abs(r1)), np.max(np.abs(r2))))
    assert _order(*res) > 2.5


def test_linearization_around_profile_has_rate_three_on_h():
    g = make_grid(24, 9, "chebyshev")
    h1, h2 = mode_basis("u-star", g.rho)["h"]
    Ah = linear_operator("u-star", g) @ np.r_[h1, h2]
    assert np.max(np.abs(Ah - 3 * np.r_[h1, h2])) < 1e-4 * np.max(np.abs(h2))


def test_rhs_remainder_is_the_quadratic_term():
    g = make_grid(24, 9, "chebyshev")
    s1, s2 = static_pair("u-star", 9, g.rho)
    h1, h2 = mode_basis("u-star", g.rho)["h"]
    A = linear_operator("u-star", g)
    base = np.r_[rhs(RadialStatePair(0.0, g.rho, s1, s2, 9, "u-star"), g)]
    for eps in (1e-1, 1e-2):
        moved = np.r_[rhs(RadialStatePair(0.0, g.rho, s1 + eps * h1, s2 + eps * h2, 9, "u-star"), g)]
        remainder = moved - base - eps * (A @ np.r_[h1, h2])
        assert np.allclose(remainder, np.r_[np.zeros_like(h1), eps ** 2 * h1 ** 2], atol=1e-9)


def test_rhs_flags_non_finite_state():
    g = make_grid(10, 9)
    s1, s2 = static_pair("u-star", 9, g.rho)
    s1 = s1.copy()
    s1[3] = np.nan
    with pytest.raises(DivergenceError):
        rhs(RadialStatePair(0.0, g.rho, s1, s2, 9, "u-star"), g)


# ---------------------------------------------------------------------------
# projections

@pytest.mark.parametrize("kind, n", [("fd", 200), ("chebyshev", 24)])
def test_discrete_eigenvalues_match_rates(kind, n):
    eig = projector("u-star", make_grid(n, 9, kind)).eigenvalues
    assert eig["h"] == pytest.approx(3, abs=1e-6)
    assert eig["g"] == pytest.approx(1, abs=1e-5)


def test_amplitudes_of_zero_and_of_h():
    g = make_grid(24, 9, "chebyshev")
    zero = (np.zeros_like(g.rho), np.zeros_like(g.rho))
    assert mode_amplitudes(zero, "u-star", g).amplitudes == {"h": 0.0, "g": 0.0}
    h1, h2 = mode_basis("u-star", g.rho)["h"]
    for method in ("spectral", "least-squares"):
        amps = mode_amplitudes((2 * h1, 2 * h2), "u-star", g, method)
        assert amps.amplitudes["h"] == pytest.approx(2, abs=1e-8)
        assert abs(amps.amplitudes["g"]) < 1e-8


@given(st.floats(-5, 5), st.floats(-5, 5))
def test_least_squares_amplitudes_are_linear(a, b):
    g = make_grid(60, 9)
    basis = mode_basis("u-star", g.rho)
    phi = tuple(a * x + b * y for x, y in zip(basis["h"], basis["g"]))
    amps = mode_amplitudes(phi, "u-star", g, "least-squares")
    assert amps.amplitudes["h"] == pytest.approx(a, abs=1e-9)
    assert amps.amplitudes["g"] == pytest.approx(b, abs=1e-9)
    assert amps.residual < 1e-9 * (1 + abs(a) + abs(b))


def test_spectral_and_least_squares_agree_on_basis():
    g = make_grid(200, 9)
    gb = mode_basis("u-star", g.rho)["g"]
    spec = mode_amplitudes(gb, "u-star", g).amplitudes
    lsq = mode_amplitudes(gb, "u-star", g, "least-squares").amplitudes
    assert spec["g"] == pytest.approx(lsq["g"], abs=1e-5)


def test_unknown_projection_method():
    g = make_grid(20, 9)
    with pytest.raises(ValueError):
        mode_amplitudes(mode_basis("u-star", g.rho)["h"], "u-star", g, "qr")


def test_degenerate_basis_is_flagged():
    # on a grid with a single node the two directions are parallel
    g = make_grid(1, 9, "chebyshev")
    g.rho = g.rho[:1]
    g.D1 = g.D1[:1, :1]
    with pytest.raises(ConditioningError):
        mode_amplitudes(mode_basis("u-star", g.rho)["h"], "u-star", g, "least-squares")


def test_blowup_time_misset_excites_constant_family_mode():
    # (T^2 - 1) 6, (T^3 - 1) 12 = 12 eta (1, 3) + O(eta^2)
    g = make_grid(100, 9)
    ratios = []
    for eta in (1e-4, 2e-4, 4e-4):
        amp = mode_amplitudes(upsilon_data("kappa", 9, g, T=1 + eta).perturbation(), "kappa", g).amplitudes["g"]
        ratios.append(amp / eta)
    assert np.ptp(ratios) <= 0.1 * np.mean(ratios)
    assert ratios[0] == pytest.approx(12, rel=1e-3)


# ---------------------------------------------------------------------------
# time stepping

def test_static_data_stays_put():
    g = make_grid(24, 9, "chebyshev")
    tr = evolve(upsilon_data("u-star", 9, g), g, 2.0)
    assert max(tr.distance) < 1e-6
    assert not tr.diverged


@pytest.mark.parametrize("mode, rate", [("h", 3.0), ("g", 1.0)])
def test_unstable_mode_growth_rates(mode, rate):
    g = make_grid(24, 9, "chebyshev")
    s1, s2 = static_pair("u-star", 9, g.rho)
    m1, m2 = mode_basis("u-star", g.rho)[mode]
    state = RadialStatePair(0.0, g.rho, s1 + 1e-8 * m1, s2 + 1e-8 * m2, 9, "u-star")
    tr = evolve(state, g, 2.0, record_every=0.1, nonlinear=False)
    assert fit_rate(tr.taus, tr.distance).exponent == pytest.approx(rate, abs=0.01)


def test_linear_regime_fidelity():
    g = make_grid(100, 9)
    st0 = upsilon_data("u-star", 9, g, f=_bump(1e-4))
    lin = evolve(st0, g, 1.0, record_every=0.1, nonlinear=False)
    full = evolve(st0, g, 1.0, record_every=0.1)
    rel = np.abs(np.array(full.distance) - lin.distance) / np.array(lin.distance)
    assert np.max(rel) < 0.05


def test_time_stepping_converges_in_grid_size():
    finals = []
    for n in (50, 100, 200):
        g = make_grid(n, 9)
        tr = evolve(upsilon_data("kappa", 9, g, f=_bump(1e-3)), g, 1.0, record_every=1.0)
        finals.append(tr.distance[-1])
    e1, e2 = abs(finals[0] - finals[2]), abs(finals[1] - finals[2])
    assert e1 / e2 > 4


def test_tau_end_limit():
    g = make_grid(10, 9)
    with pytest.raises(ValueError):
        evolve(upsilon_data("kappa", 9, g), g, 21.0)


def test_divergence_is_reported():
    g = make_grid(40, 9)
    state = upsilon_data("u-star", 9, g, alpha=0.04)
    tr = evolve(state, g, 5.0, blowup_threshold=1e3)
    assert tr.diverged and tr.last_tau < 5.0
    with pytest.raises(DivergenceError) as info:
        evolve(state, g, 5.0, blowup_threshold=1e3, raise_on_divergence=True)
    assert info.value.last_tau == tr.last_tau


def test_trajectory_rows_have_one_column_per_record():
    g = make_grid(30, 9)
    tr = evolve(upsilon_data("u-star", 9, g, f=_bump(1e-5)), g, 0.5, record_every=0.1)
    rows = list(tr.rows())
    assert len(rows) == len(tr.taus)
    assert tr.taus[0] == 0 and tr.taus[-1] == pytest.approx(0.5)
    # tau, distance, two amplitudes, sup, min psi1
    assert all(len(row) == 6 for row in rows)


# ---------------------------------------------------------------------------
# rate fits

def test_fit_rate_exact_exponential():
    t = np.linspace(0, 5, 51)
    fit = fit_rate(t, 3 * np.exp(-0.5 * t))
    assert fit.exponent == pytest.approx(-0.5, abs=1e-6)
    assert fit.amplitude == pytest.approx(3, rel=1e-9)
    assert fit.meaningful


def test_fit_rate_with_noise_and_window():
    rng = np.random.default_rng(3)
    t = np.linspace(0, 4, 81)
    v = np.exp(3 * t) * (1 + 1e-3 * rng.standard_normal(t.size))
    v[:10] = 1.0  # transient outside the window
    assert fit_rate(t, v, (1.0, 4.0)).exponent == pytest.approx(3, abs=0.01)


def test_fit_rate_guards():
    with pytest.raises(ValueError):
        fit_rate(np.arange(5), np.ones(5))
    with pytest.raises(ValueError):
        fit_rate(np.arange(20), np.r_[np.ones(19), 0.0])


# ---------------------------------------------------------------------------
# tuning

def test_tune_on_unperturbed_data_is_identity():
    g = make_grid(40, 9)
    res = tune("u-star", 9, g)
    assert (res.params.T, res.params.alpha) == (1.0, 0.0)
    assert res.verdict == "pass"
    assert res.to_json()["T"] == 1.0


def test_tune_recovers_a_known_time_shift():
    # (6 s^2, 12 s^3) rescaled by T is static exactly when T = 1/s
    g = make_grid(60, 9)
    s = 1.02
    f = lambda r: np.full_like(r, 6 * (s ** 2 - 1))
    gg = lambda r: np.full_like(r, 12 * (s ** 3 - 1))
    res = tune("kappa", 9, g, f, gg)
    assert res.params.T == pytest.approx(1 / s, rel=1e-12)
    assert res.objective < 1e-13
    assert res.verdict == "pass"
