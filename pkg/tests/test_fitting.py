import math

import numpy as np
import pytest
from scipy.interpolate import BarycentricInterpolator

from strapdown.coning import ConingParams, coning_rate, synth_batch
from strapdown.errors import FitError
from strapdown.fitting import (
    GyroBatch,
    fit_cheb_increments,
    fit_cheb_rates,
    fit_normal_increments,
    fit_normal_rates,
    increments_from_cheb,
    increments_from_normal,
    omega_derivatives,
)
from strapdown.polynomials import ChebPoly, VecPoly

T = 1e-3
W0 = np.array([0.3, -1.2, 2.5])


def dense_times(batch, n=201):
    return np.linspace(0.0, batch.t_n, n)


def test_batch_validation():
    with pytest.raises(ValueError):
        GyroBatch("angle", np.zeros((2, 3)), T)
    with pytest.raises(ValueError):
        GyroBatch("rate", np.zeros((2, 3)), 0.0)
    b = GyroBatch("rate", np.zeros((4, 3)), T)
    assert b.N == 4 and b.t_n == pytest.approx(4e-3)
    np.testing.assert_allclose(b.times, [1e-3, 2e-3, 3e-3, 4e-3])


@pytest.mark.parametrize("n", [0, 2, 4])
def test_constant_rates_fit_exactly(n):
    b = GyroBatch("rate", np.tile(W0, (5, 1)), T)
    p = fit_normal_rates(b, n)
    np.testing.assert_allclose(p.coeffs[0], W0, rtol=1e-12)
    np.testing.assert_allclose(p.coeffs[1:] * b.t_n ** np.arange(1, n + 1)[:, None], 0, atol=1e-12)
    c = fit_cheb_rates(b, n)
    np.testing.assert_allclose(c.coeffs[0], W0, rtol=1e-12)
    np.testing.assert_allclose(c.coeffs[1:], 0, atol=1e-12)


def test_quadratic_rate_recovered():
    a, bb, c = np.array([1.0, 0, -2]), np.array([40.0, 5, 0]), np.array([3e3, -1e3, 7e2])
    t = T * np.arange(1, 4)
    samples = a + bb * t[:, None] + c * t[:, None] ** 2
    p = fit_normal_rates(GyroBatch("rate", samples, T), 2)
    np.testing.assert_allclose(p.coeffs, [a, bb, c], rtol=1e-10, atol=1e-10)


def test_eq51_two_sample_coefficients(rng):
    d = rng.standard_normal((2, 3)) * 1e-3
    p = fit_normal_increments(GyroBatch("increment", d, T))
    d0, d1 = (3 * d[0] - d[1]) / (2 * T), (d[1] - d[0]) / T**2
    np.testing.assert_allclose(p.coeffs[0], d0, atol=1e-12 * np.abs(d0).max())
    np.testing.assert_allclose(p.coeffs[1], d1, atol=1e-12 * np.abs(d1).max())


def test_eq51_three_sample_constant_term(rng):
    d = rng.standard_normal((3, 3)) * 1e-3
    p = fit_normal_increments(GyroBatch("increment", d, T))
    ref = (11 * d[0] - 7 * d[1] + 2 * d[2]) / (6 * T)
    np.testing.assert_allclose(p.coeffs[0], ref, atol=1e-12 * np.abs(ref).max())


def test_constant_rate_increments():
    b = GyroBatch("increment", np.tile(W0 * T, (6, 1)), T)
    np.testing.assert_allclose(fit_normal_increments(b).coeffs[0], W0, rtol=1e-12)
    c = fit_cheb_increments(b)
    np.testing.assert_allclose(c.coeffs[0], W0, rtol=1e-12)
    np.testing.assert_allclose(c.coeffs[1:], 0, atol=1e-10)


def test_linear_rate_gives_two_chebyshev_terms():
    a, bb = np.array([1.0, 2, 3]), np.array([100.0, -50, 10])
    t = T * np.arange(1, 5)
    c = fit_cheb_rates(GyroBatch("rate", a + bb * t[:, None], T))
    t_n = 4 * T
    np.testing.assert_allclose(c.coeffs[0], a + bb * t_n / 2, rtol=1e-12)
    np.testing.assert_allclose(c.coeffs[1], bb * t_n / 2, rtol=1e-10)
    np.testing.assert_allclose(c.coeffs[2:], 0, atol=1e-12)


def test_cheb_increment_round_trip(rng):
    true = ChebPoly(rng.standard_normal((5, 3)), 5 * T)
    inc = increments_from_cheb(true, 5)
    np.testing.assert_allclose(fit_cheb_increments(GyroBatch("increment", inc, T)).coeffs, true.coeffs, atol=1e-10)


def _coning_batch(kind, fc=10.0, N=8):
    return synth_batch(ConingParams(fc=fc, N=N), 3 * N, kind)


def test_rate_fit_interpolates_samples():
    b = _coning_batch("rate")
    scale = np.abs(b.samples).max()
    assert np.abs(fit_normal_rates(b)(b.times) - b.samples).max() < 1e-10 * scale
    assert np.abs(fit_cheb_rates(b).at_time(b.times) - b.samples).max() < 1e-10 * scale


def test_increment_fit_reproduces_increments():
    b = _coning_batch("increment")
    scale = np.abs(b.samples).max()
    assert np.abs(increments_from_normal(fit_normal_increments(b), b.N, T) - b.samples).max() < 1e-10 * scale
    assert np.abs(increments_from_cheb(fit_cheb_increments(b), b.N) - b.samples).max() < 1e-10 * scale


@pytest.mark.parametrize("kind", ["rate", "increment"])
def test_bases_agree_on_dense_grid(kind):
    b = _coning_batch(kind)
    t = dense_times(b)
    if kind == "rate":
        n, c = fit_normal_rates(b), fit_cheb_rates(b)
    else:
        n, c = fit_normal_increments(b), fit_cheb_increments(b)
    scale = np.abs(n(t)).max()
    assert np.abs(n(t) - c.at_time(t)).max() < 1e-10 * scale


def test_rate_fit_error_matches_independent_interpolant():
    p = ConingParams(fc=50.0, N=8)
    b = synth_batch(p, 0, "rate")
    t = dense_times(b, 501)
    ours = fit_normal_rates(b)(t) - coning_rate(p, t)
    oracle = BarycentricInterpolator(b.times, b.samples)(t) - coning_rate(p, t)
    assert np.abs(ours).max() == pytest.approx(np.abs(oracle).max(), rel=1e-6)


def test_degree_limits():
    b = GyroBatch("rate", np.zeros((3, 3)), T)
    with pytest.raises(FitError):
        fit_normal_rates(b, 3)
    with pytest.raises(FitError):
        fit_cheb_rates(b, -1)
    with pytest.raises(FitError):
        fit_normal_increments(b)


def test_omega_derivatives_are_factorial_scaled():
    p = VecPoly([[1.0, 0, 0], [0, 2.0, 0], [0, 0, 3.0]])
    d = omega_derivatives(p, 4)
    np.testing.assert_array_equal(d, [[1, 0, 0], [0, 2, 0], [0, 0, 6], [0, 0, 0], [0, 0, 0]])
    assert math.factorial(2) * 3.0 == d[2, 2]
