import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from hemirobin.errors import ConvergenceError, DomainError
from hemirobin.specfun import (
    LegendreArgs,
    SeriesControl,
    digamma,
    dlog_gamma_ratio_G,
    gamma_ratio_G,
    hyp2f1_series,
    legendre_P,
    legendre_P_at0,
    legendre_P_dx,
    legendre_P_normalized,
    legendre_table,
    log_gamma,
    log_gamma_ratio_G,
    olver_F,
)

EULER_GAMMA = 0.57721566490153286061


# -- Gamma family -------------------------------------------------------------


@pytest.mark.parametrize(
    "s, expected",
    [(1.0, 0.0), (0.5, 0.5 * math.log(math.pi)), (10.0, math.log(362880.0)), (2.0, 0.0)],
)
def test_log_gamma_known_values(s, expected):
    assert log_gamma(s) == pytest.approx(expected, rel=1e-13, abs=1e-15)


def test_log_gamma_duplication_formula():
    for s in np.linspace(0.3, 400.0, 57):
        lhs = log_gamma(s) + log_gamma(s + 0.5)
        rhs = (1 - 2 * s) * math.log(2) + 0.5 * math.log(math.pi) + log_gamma(2 * s)
        assert lhs == pytest.approx(rhs, rel=1e-13, abs=1e-13)


@pytest.mark.parametrize("s", [0.0, -1.0, -2.5])
def test_log_gamma_domain(s):
    with pytest.raises(DomainError):
        log_gamma(s)
    with pytest.raises(DomainError):
        digamma(s)


def test_digamma_values():
    assert digamma(1.0) == pytest.approx(-EULER_GAMMA, rel=1e-12)
    assert digamma(2.0) == pytest.approx(1 - EULER_GAMMA, rel=1e-12)
    # mpmath at 40 digits
    assert digamma(0.5) == pytest.approx(-1.9635100260214234794, rel=1e-12)


def test_G_known_values():
    assert gamma_ratio_G(0.0) == pytest.approx(1 / math.sqrt(math.pi), rel=1e-14)
    assert gamma_ratio_G(1.0) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-14)
    assert math.sqrt(50) < gamma_ratio_G(100.0) < math.sqrt(51)


def test_G_no_overflow_at_large_argument():
    g = gamma_ratio_G(1e6)
    assert math.isfinite(g)
    assert math.sqrt(5e5) < g < math.sqrt(5e5 + 1)


def test_G_domain():
    with pytest.raises(DomainError):
        gamma_ratio_G(-0.1)


def test_G_bounds_and_monotonicity_on_grid():
    s = 0.1 * np.arange(1, 10_001)
    g = gamma_ratio_G(s)
    assert np.all(np.sqrt(s / 2) < g)
    assert np.all(g < np.sqrt(s / 2 + 1))
    assert np.all(np.diff(g) > 0)


def test_dlogG_against_finite_difference_and_bounds():
    s = np.concatenate([np.linspace(0.01, 10, 200), np.geomspace(11, 1e5, 50)])
    d = dlog_gamma_ratio_G(s)
    assert np.all((d > 0) & (d < math.log(2)))
    assert np.all(np.diff(d) < 0)
    # the bound 1/2 holds only past s* = 0.31762077 (mpmath root of (ln G)' = 1/2)
    assert np.all(d[s > 0.3177] < 0.5)
    assert np.all(d[s < 0.3176] > 0.5)
    assert dlog_gamma_ratio_G(0.0) == pytest.approx(math.log(2), rel=1e-14)
    # differences of lgamma lose digits at large s, so finite differences stay small
    small = s[s < 11]
    h = 1e-5
    fd = (log_gamma_ratio_G(small + h) - log_gamma_ratio_G(small - h)) / (2 * h)
    np.testing.assert_allclose(dlog_gamma_ratio_G(small), fd, rtol=1e-7)
    for x in (50.0, 1234.5, 1e5):
        ref = float((mp.digamma(mp.mpf(x) / 2 + 1) - mp.digamma((mp.mpf(x) + 1) / 2)) / 2)
        assert dlog_gamma_ratio_G(x) == pytest.approx(ref, rel=1e-9)


# -- hypergeometric series ------------------------------------------------------


def test_olver_F_examples():
    assert olver_F(3.7, 0.0, 2.0, 0.4) == 1.0
    assert olver_F(1.0, 1.0, 2.0, 0.5) == pytest.approx(-math.log(0.5) / 0.5, rel=1e-14)
    assert olver_F(2.3, -1.7, 1.0, 0.0) == 1.0


@pytest.mark.parametrize("a, b, c, z", [(0.3, 1.7, 2.0, 0.6), (-2.5, 4.1, 3.0, -0.8), (5.0, -3.3, 6.0, 0.95)])
def test_hyp2f1_against_mpmath(a, b, c, z):
    ref = float(mp.hyp2f1(a, b, c, z))
    assert hyp2f1_series(a, b, c, z) == pytest.approx(ref, rel=1e-12)


def test_halving_tolerance_changes_little():
    ctl = SeriesControl(rel_tol=1e-12)
    half = SeriesControl(rel_tol=5e-13)
    for a, b, c, z in [(0.3, 1.7, 2.0, 0.6), (4.5, -0.5, 1.0, 0.9), (7.2, -6.2, 3.0, 0.7)]:
        v = olver_F(a, b, c, z, ctl)
        assert abs(olver_F(a, b, c, z, half) - v) < ctl.rel_tol * abs(v)


def test_series_nonconvergence_is_reported():
    with pytest.raises(ConvergenceError):
        hyp2f1_series(0.5, 0.5, 1.0, 0.999999, SeriesControl(rel_tol=1e-15, max_terms=100))


@pytest.mark.parametrize("kw", [{"rel_tol": 1e-5}, {"rel_tol": 0.0}, {"max_terms": 10}])
def test_series_control_validation(kw):
    with pytest.raises(DomainError):
        SeriesControl(**kw)


# -- Ferrers functions -------------------------------------------------------------


def test_legendre_args_validation():
    with pytest.raises(DomainError):
        LegendreArgs(-0.5, 0, 0.2)
    with pytest.raises(DomainError):
        LegendreArgs(1.0, -1, 0.2)
    with pytest.raises(DomainError):
        LegendreArgs(1.0, 0, -1.0)
    with pytest.raises(DomainError):
        LegendreArgs(1.0, 0, 1.5)


@pytest.mark.parametrize(
    "nu, m, x, expected",
    [(0.0, 0, 0.3, 1.0), (1.0, 0, 0.3, 0.3), (2.0, 0, 0.0, -0.5), (3.0, 0, 1.0, 1.0), (2.0, 1, 1.0, 0.0)],
)
def test_legendre_P_elementary(nu, m, x, expected):
    assert legendre_P(LegendreArgs(nu, m, x)) == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize("x", [-0.9, -0.3, 0.0, 0.4, 0.8])
def test_order_one_and_two_normalization(x):
    # Condon-Shortley: P_1^1 = -sqrt(1-x^2), P_2^2 = 3 (1-x^2); a stray 2^m factor fails both
    s = math.sqrt(1 - x * x)
    assert legendre_P(LegendreArgs(1.0, 1, x)) == pytest.approx(-s, rel=1e-13)
    assert legendre_P(LegendreArgs(2.0, 2, x)) == pytest.approx(3 * s * s, rel=1e-13)
    assert legendre_P(LegendreArgs(2.0, 1, x)) == pytest.approx(-3 * x * s, rel=1e-12, abs=1e-15)


def _classical(ell, m, x):
    """Associated Legendre by the standard upward recurrence in degree."""
    pmm = 1.0
    s = math.sqrt((1 - x) * (1 + x))
    for k in range(1, m + 1):
        pmm *= -(2 * k - 1) * s
    if ell == m:
        return pmm
    p1 = x * (2 * m + 1) * pmm
    if ell == m + 1:
        return p1
    p0 = pmm
    for l in range(m + 2, ell + 1):
        p0, p1 = p1, ((2 * l - 1) * x * p1 - (l + m - 1) * p0) / (l - m)
    return p1


def test_integer_degree_matches_classical_recurrence():
    rng = np.random.default_rng(7)
    for _ in range(200):
        ell = int(rng.integers(0, 21))
        m = int(rng.integers(0, ell + 1))
        x = float(rng.uniform(-0.999, 0.999))
        ref = _classical(ell, m, x)
        got = legendre_P(LegendreArgs(float(ell), m, x))
        assert got == pytest.approx(ref, rel=1e-10, abs=1e-300)


def test_noninteger_degree_against_mpmath():
    rng = np.random.default_rng(11)
    for _ in range(60):
        nu = float(rng.uniform(0, 30))
        m = int(rng.integers(0, 6))
        x = float(rng.uniform(-0.95, 0.95))
        ref = float(mp.legenp(nu, m, x, type=2))
        # scale: the size of the function near this degree, so that relative
        # error is not measured at a near-zero of an oscillation
        scale = math.exp(0.5 * (math.lgamma(nu + m + 1) - math.lgamma(max(nu - m, 0) + 1))) if nu > m - 1 else 1.0
        got = legendre_P(LegendreArgs(nu, m, x))
        assert abs(got - ref) <= 1e-10 * max(abs(ref), scale)


def test_value_at_2p5_1_half_against_mpmath_and_ode():
    ref = -0.98737817853170060003  # mpmath, 40 digits
    got = legendre_P(LegendreArgs(2.5, 1, 0.5))
    assert got == pytest.approx(ref, rel=1e-12)

    # independent oracle: short series near the pole, then the polar ODE
    nu, m = 2.5, 1
    th0 = 1e-3
    z = math.sin(th0 / 2) ** 2
    pref = -nu * (nu + 1) / 2  # (-1)^m Gamma(nu+m+1)/(2^m m! Gamma(nu-m+1))
    c1 = (nu + m + 1) * (m - nu) / (m + 1)
    c2 = c1 * (nu + m + 2) * (m - nu + 1) / (2 * (m + 2))
    f = 1 + c1 * z + c2 * z * z
    df = (c1 + 2 * c2 * z) * 0.5 * math.sin(th0)
    s = math.sin(th0)
    u0 = pref * s * f
    du0 = pref * (math.cos(th0) * f + s * df)

    def rhs(th, y):
        u, du = y
        return [du, -math.cos(th) / math.sin(th) * du - (nu * (nu + 1) - m * m / math.sin(th) ** 2) * u]

    sol = solve_ivp(rhs, (th0, math.acos(0.5)), [u0, du0], method="DOP853", rtol=1e-12, atol=1e-14)
    assert sol.y[0, -1] == pytest.approx(ref, rel=1e-8)


@pytest.mark.parametrize("x", [-0.6, 0.0, 0.3, 0.7])
def test_legendre_dx_elementary(x):
    assert legendre_P_dx(LegendreArgs(1.0, 0, x)) == pytest.approx(1.0, rel=1e-13)
    assert legendre_P_dx(LegendreArgs(2.0, 0, x)) == pytest.approx(3 * x, rel=1e-13, abs=1e-14)


def test_legendre_dx_3p2_2_half():
    h = 1e-5
    fd = (legendre_P(LegendreArgs(3.2, 2, 0.5 + h)) - legendre_P(LegendreArgs(3.2, 2, 0.5 - h))) / (2 * h)
    got = legendre_P_dx(LegendreArgs(3.2, 2, 0.5))
    assert got == pytest.approx(fd, rel=1e-8)
    assert got == pytest.approx(8.0086764135010150669, rel=1e-11)  # mpmath derivative


def test_legendre_dx_matches_finite_difference_broadly():
    rng = np.random.default_rng(3)
    h = 1e-5
    for _ in range(40):
        nu = float(rng.uniform(0.5, 25))
        m = int(rng.integers(0, 4))
        x = float(rng.uniform(-0.9, 0.9))
        fd = (legendre_P(LegendreArgs(nu, m, x + h)) - legendre_P(LegendreArgs(nu, m, x - h))) / (2 * h)
        got = legendre_P_dx(LegendreArgs(nu, m, x))
        scale = max(abs(fd), nu ** (m + 1))
        assert abs(got - fd) <= 1e-7 * scale


def test_at0_examples():
    assert legendre_P_at0(1.0, 0) == (0.0, pytest.approx(1.0, rel=1e-14))
    v, d = legendre_P_at0(2.0, 0)
    assert v == pytest.approx(-0.5, rel=1e-14) and d == 0.0
    v, d = legendre_P_at0(2.3, 1)
    assert v == pytest.approx(0.61066282869034523657, rel=1e-12)
    assert d == pytest.approx(-3.2007227938855834282, rel=1e-12)
    h = 1e-5
    fd = (legendre_P(LegendreArgs(2.3, 1, h)) - legendre_P(LegendreArgs(2.3, 1, -h))) / (2 * h)
    assert d == pytest.approx(fd, rel=1e-8)
    assert v == pytest.approx(legendre_P(LegendreArgs(2.3, 1, 0.0)), rel=1e-12)


def test_at0_exact_zeros_at_integer_parity():
    for ell in range(0, 30):
        for m in range(0, ell + 1):
            v, d = legendre_P_at0(float(ell), m)
            if (ell + m) % 2:
                assert v == 0.0 and d != 0.0
            else:
                assert d == 0.0 and v != 0.0


def test_at0_agrees_with_series_path():
    rng = np.random.default_rng(5)
    for _ in range(100):
        nu = float(rng.uniform(0, 50))
        m = int(rng.integers(0, int(nu) + 1))
        v, _ = legendre_P_at0(nu, m)
        assert legendre_P(LegendreArgs(nu, m, 0.0)) == pytest.approx(v, rel=1e-10)


@settings(max_examples=60, deadline=None)
@given(
    nu=st.floats(0.0, 40.0),
    m=st.integers(0, 5),
    x=st.floats(-0.95, 0.95),
)
def test_normalized_function_is_bounded(nu, m, x):
    # sqrt(Gamma(nu-m+1)/Gamma(nu+m+1)) |P| stays O(1) on compact x-ranges
    if nu <= m - 1:
        return
    assert abs(legendre_P_normalized(nu, m, x)) < 5.0


def test_table_matches_pointwise_values():
    nu0 = np.array([0.35, 1.8, 2.0])
    p, d = legendre_table(nu0, 1, 0.3, 12)
    for i, a in enumerate(nu0):
        for k in (0, 5, 12):
            nu = a + k
            scale = math.exp(0.5 * (math.lgamma(nu + 2) - math.lgamma(nu)))
            assert p[i, k] * scale == pytest.approx(legendre_P(LegendreArgs(nu, 1, 0.3)), rel=1e-10, abs=1e-12)
            assert d[i, k] * scale == pytest.approx(legendre_P_dx(LegendreArgs(nu, 1, 0.3)), rel=1e-9, abs=1e-10)


def test_table_negative_x_stable():
    # continuation past the equator must agree with mpmath at high degree
    p, _ = legendre_table(np.array([1.4]), 2, -0.5, 59)
    nu = 60.4
    ref = float(mp.legenp(nu, 2, -0.5, type=2)) * math.exp(0.5 * (math.lgamma(nu - 1) - math.lgamma(nu + 3)))
    assert abs(p[0, -1] - ref) < 1e-9
