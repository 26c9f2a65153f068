import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from amo import identities as I
from amo.eigensolve import EigenPair
from amo.fractions import Fraction, farey_sequence

RES = I.RESIDUAL_TOL


@pytest.mark.parametrize("theta, lam", [(Fraction(1, 3), 2.0), (Fraction(2, 5), 1.0), (Fraction(1, 2), 3.0),
                                        (Fraction(3, 7), 0.5), (Fraction(1, 4), 1.0), (Fraction(1, 5), 2.0),
                                        (Fraction(2, 5), 3.0), (Fraction(0, 1), 2.0), (Fraction(1, 2), 2.0)])
def test_residuals_vanish_on_eigenpairs(theta, lam):
    for pair in I.eigenpairs(theta, lam):
        assert pair.residual < 1e-12
        assert I.residual_24(pair, theta) <= RES
        assert I.residual_31(pair, theta, lam) <= RES
        assert I.residual_32(pair, I.spectral_sums(pair, theta, lam)) <= RES
        assert I.residual_energy(pair, theta, lam) <= RES


def test_negative_control_random_vector():
    rng = np.random.default_rng(7)
    x = I.random_unit_vectors(rng, 200, 3)
    assert np.median(I.residual_24(x, Fraction(1, 3))) > 1e-3


def test_dropping_wraparound_breaks_identity():
    # the same sums with non-cyclic neighbours do not vanish
    theta, lam = Fraction(2, 7), 2.0
    worst = 0.0
    for pair in I.eigenpairs(theta, lam):
        x = pair.vector
        m = np.arange(1, 7)
        open_sum = np.sum(x[1:] * x[:-1] * np.sin((2 * m - 1) * np.pi * theta.value))
        worst = max(worst, abs(open_sum))
    assert worst > 1e-3


def test_degenerate_eigenspace_rotation():
    # theta = 0, q = 1 is trivial; use lambda = 0 at q = 4, where +-0 is doubly degenerate
    theta = Fraction(1, 4)
    pairs = I.eigenpairs(theta, 0.0)
    zero = [p for p in pairs if abs(p.value) < 1e-12]
    assert len(zero) == 2
    c, s = math.cos(0.4), math.sin(0.4)
    mixed = c * zero[0].vector + s * zero[1].vector
    pair = EigenPair(0.0, mixed, 0.0)
    assert I.residual_24(pair, theta) <= RES
    assert I.residual_31(pair, theta, 0.0) <= RES
    assert I.residual_energy(pair, theta, 0.0) <= RES


def test_spectral_sums_deterministic_and_consistent():
    theta, lam = Fraction(2, 5), 2.0
    pair = I.eigenpairs(theta, lam)[-1]
    a, b = I.spectral_sums(pair, theta, lam), I.spectral_sums(pair, theta, lam)
    assert (a.S, a.T) == (b.S, b.T)
    x = pair.vector
    c = np.cos(2 * np.pi * np.arange(5) * theta.value)
    skip = sum(x[(m + 1) % 5] * x[(m - 1) % 5] for m in range(5))
    assert a.S == pytest.approx(pair.value * np.sum(c * x * x) + skip, abs=1e-14)
    assert a.T == pytest.approx(lam * np.sum(c * c * x * x) + skip, abs=1e-14)


def test_spectral_sums_reject_zero_lambda():
    pair = I.eigenpairs(Fraction(1, 3), 1.0)[0]
    with pytest.raises(ValueError):
        I.spectral_sums(pair, Fraction(1, 3), 0.0)


def test_lemma22_examples():
    _, rhs = I.check_lemma22(np.eye(4)[0], Fraction(1, 4))
    assert rhs == pytest.approx(math.sqrt(2) / 2)
    lhs, _ = I.check_lemma22(np.eye(5)[2], Fraction(1, 5))
    assert lhs == 0.0


@pytest.mark.parametrize("theta, expected", [(Fraction(1, 8), math.cos(math.pi / 8)),
                                             (Fraction(1, 3), math.sin(math.pi / 3))])
def test_lemma22_rhs_branches(theta, expected):
    _, rhs = I.check_lemma22(np.eye(theta.q)[0], theta)
    assert rhs == pytest.approx(expected, abs=1e-15)


def test_lemma31_examples():
    lhs, rhs = I.check_lemma31(np.eye(4)[0], Fraction(1, 4))
    assert (lhs, rhs) == (pytest.approx(2.0), pytest.approx(3.0))
    lhs, rhs = I.check_lemma31(np.full(3, 1 / math.sqrt(3)), Fraction(1, 3))
    assert lhs <= rhs


def test_cor32_reduces_to_lemma31_at_two():
    y = I.random_unit_vectors(np.random.default_rng(0), 50, 7)
    theta = Fraction(2, 7)
    l31, r31 = I.check_lemma31(y, theta)
    l32, r32 = I.check_cor32(y, theta, 2.0)
    np.testing.assert_allclose(l32, l31, atol=1e-14)
    assert r32 == pytest.approx(r31, abs=1e-14)


@pytest.mark.parametrize("theta, q, check", [
    (Fraction(1, 3), 12, "lemma22"), (Fraction(2, 5), 10, "lemma31"), (Fraction(3, 8), 8, "cor32"),
])
def test_random_vectors(theta, q, check):
    y = I.random_unit_vectors(np.random.default_rng(q), 10_000, q)
    if check == "lemma22":
        lhs, rhs = I.check_lemma22(y, theta)
    elif check == "lemma31":
        lhs, rhs = I.check_lemma31(y, theta)
    else:
        lhs, rhs = I.check_cor32(y, theta, 1.0)
    assert np.all(lhs <= rhs + I.INEQUALITY_SLACK)


def test_cor32_small_lambda():
    y = I.random_unit_vectors(np.random.default_rng(1), 1000, 9)
    lhs, rhs = I.check_cor32(y, Fraction(4, 9), 0.01)
    assert np.all(lhs <= rhs + I.INEQUALITY_SLACK)


@pytest.mark.parametrize("bad", [0.0, -1.0, 2.5])
def test_cor32_lambda_range(bad):
    with pytest.raises(ValueError):
        I.check_cor32(np.eye(3)[0], Fraction(1, 3), bad)


def test_non_unit_rejected():
    with pytest.raises(ValueError):
        I.check_lemma31(np.ones(3), Fraction(1, 3))


@given(st.integers(0, 10_000), st.sampled_from(farey_sequence(15)))
def test_inequalities_property(seed, theta):
    y = I.random_unit_vectors(np.random.default_rng(seed), 64, theta.q)
    for lhs, rhs in (I.check_lemma22(y, theta), I.check_lemma31(y, theta), I.check_cor32(y, theta, 0.7)):
        assert np.all(lhs <= rhs + I.INEQUALITY_SLACK)


def test_suite_small():
    report = I.eigen_identity_suite(8, [0.5, 2.0])
    I.inequality_suite(farey_sequence(8), 500, seed=3, report=report)
    assert report.passed
    assert set(report.max_residual) == {"eq24", "eq31", "eq32", "energy"}
    assert set(report.min_margin) == {"lemma22", "lemma31", "cor32"}
