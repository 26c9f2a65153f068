import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from amo import bounds as B
from amo import trial_vectors as T

N_TRUNC = 400
THETAS = np.linspace(0.0, 0.5, 1002)[1:-1]


def apply_harper(x, n, theta):
    """(H x)_n = x_{n+1} + x_{n-1} + 2 cos(2 pi n theta) x_n on a finite window padded with zeros."""
    hx = 2.0 * np.cos(2 * np.pi * n * theta) * x
    hx[:-1] += x[1:]
    hx[1:] += x[:-1]
    return hx


def direct_quotient_sq(x, n, theta):
    hx = apply_harper(x, n, theta)
    return float(hx @ hx / (x @ x))


def x_vector(alpha):
    n = np.arange(-N_TRUNC, N_TRUNC + 1)
    return np.tan(alpha / 2) ** np.abs(n), n


def y_vector(alpha, A, B):
    n = np.arange(-2 * N_TRUNC, 2 * N_TRUNC + 1)
    r = np.tan(alpha / 2)
    k = np.floor_divide(n, 2)
    return np.where(n % 2 == 0, A, B) * r ** np.abs(k), n


def z_vector(alpha):
    n = np.arange(-3, 4)
    s10 = math.sqrt(10)
    sa, ca = math.sin(alpha), math.cos(alpha)
    return np.array([0, sa / s10, math.sqrt(0.4) * sa, ca, math.sqrt(0.4) * sa, sa / s10, 0]), n


@given(st.floats(0.01, 0.95), st.floats(-3, 3), st.floats(-3, 3))
def test_geometric_sums(r, a, b):
    k = np.arange(-2000, 2001)
    direct = np.sum(r ** np.abs(k) * np.cos(a * k + b))
    assert T.geom_cos_sum(r, a, b) == pytest.approx(direct, abs=1e-12)
    shifted = np.sum(r ** (np.abs(k) + np.abs(k - 1)) * np.cos(a * k + b))
    assert T.geom_cos_sum_shifted(r, a, b) == pytest.approx(shifted, abs=1e-12)


@pytest.mark.parametrize("theta", [0.0, 0.1, 0.25, 1 / 3, 0.41, 0.5])
@pytest.mark.parametrize("alpha", [0.3, 0.8, 1.2])
def test_x_closed_form_matches_direct(theta, alpha):
    x, n = x_vector(alpha)
    assert T.rayleigh_x_sq(theta, alpha) == pytest.approx(direct_quotient_sq(x, n, theta), abs=1e-12)


@pytest.mark.parametrize("theta", [0.0, 0.13, 0.25, 0.37, 0.5])
@pytest.mark.parametrize("alpha, phase", [(0.5, 0.3), (1.0, 2.0), (1.3, -0.7)])
def test_y_closed_form_matches_direct(theta, alpha, phase):
    A, Bm = math.cos(phase), math.sin(phase)
    y, n = y_vector(alpha, A, Bm)
    assert T.rayleigh_y_sq(theta, alpha, A, Bm) == pytest.approx(direct_quotient_sq(y, n, theta), abs=1e-12)


@given(st.floats(0, 0.5), st.floats(-3, 3))
def test_z_closed_form_matches_direct(theta, alpha):
    z, n = z_vector(alpha)
    assert T.rayleigh_z_sq(theta, alpha) == pytest.approx(direct_quotient_sq(z, n, theta), abs=1e-12)


def test_z_is_unit():
    z, _ = z_vector(0.7)
    assert z @ z == pytest.approx(1.0, abs=1e-15)


@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5))
def test_maximize_AB_against_angle_grid(a0, b0, g0):
    value, A, Bm = T.maximize_AB(a0, b0, g0)
    phi = np.linspace(0, 2 * np.pi, 100001)
    grid = np.max(a0 * np.cos(phi) ** 2 + b0 * np.sin(phi) ** 2 + g0 * np.cos(phi) * np.sin(phi))
    assert value / 2 == pytest.approx(grid, abs=1e-8)
    assert A >= 0
    assert a0 * A * A + b0 * Bm * Bm + g0 * A * Bm == pytest.approx(value / 2, abs=1e-12)


def test_classical_choices_reproduce_f1_f2_f3():
    f1 = np.array([T.rayleigh_x(t, T.alpha_f1(t)) for t in THETAS])
    f2 = np.array([math.sqrt(T.y_best_amplitudes(t, T.alpha_f2(t))[0]) for t in THETAS])
    f3 = np.array([T.rayleigh_z(t, T.z_best(t)[1]) for t in THETAS])
    np.testing.assert_allclose(f1, B.lower_f1(THETAS), atol=1e-10)
    np.testing.assert_allclose(f2, B.lower_f2(THETAS), atol=1e-10)
    np.testing.assert_allclose(f3, B.lower_f3(THETAS), atol=1e-10)


@given(st.floats(0, 0.5))
def test_optimizer_dominates_m(theta):
    value, params, family = T.optimize_lower(theta)
    assert value >= B.lower_m(theta) - 1e-9
    assert family in ("x", "y", "z")
    assert 0 < params.r < 1


def test_optimizer_value_is_attained():
    value, p, family = T.optimize_lower(1 / 3)
    assert family == "x"
    assert T.rayleigh_x(1 / 3, p.alpha) == pytest.approx(value, abs=1e-14)


def test_trial_params_validation():
    with pytest.raises(ValueError):
        T.TrialParams(1.0, 1.0)
    with pytest.raises(ValueError):
        T.TrialParams(0.5, 1.0, 1.0, 1.0)


def test_domain_errors():
    with pytest.raises(ValueError):
        T.rayleigh_x(0.6, 0.5)
    with pytest.raises(ValueError):
        T.rayleigh_x(0.2, 0.0)
