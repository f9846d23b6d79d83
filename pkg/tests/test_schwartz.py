import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tempered import schwartz as sw
from tempered.schwartz import SchwartzFn, SeminormIndex

from conftest import grid, random_fn, trapezoid

SQRT_2PI = math.sqrt(2 * math.pi)


@st.composite
def schwartz_fns(draw, max_degree=24):
    degree = draw(st.integers(0, max_degree))
    seed = draw(st.integers(0, 2**32 - 1))
    return sw.random_schwartz(np.random.default_rng(seed), degree)


def assert_coeffs_close(f, g, tol):
    n = max(f.coeffs.size, g.coeffs.size)
    assert np.abs(f.padded(n) - g.padded(n)).max() <= tol


# construction ----------------------------------------------------------------

def test_trailing_zeros_trimmed():
    f = SchwartzFn([1.0, 2.0, 0.0, 1e-20])
    assert f.degree == 1
    assert sw.zero().degree == 0 and sw.zero().is_zero()
    assert SchwartzFn([]).is_zero()


def test_coefficients_immutable():
    f = sw.basis(2)
    with pytest.raises(ValueError):
        f.coeffs[0] = 1.0


def test_equality_tolerance():
    f = SchwartzFn([1.0, 2.0])
    assert f == SchwartzFn([1.0 + 1e-13, 2.0])
    assert f != SchwartzFn([1.0 + 1e-9, 2.0])


def test_json_round_trip_exact(rng):
    f = random_fn(rng, 30)
    g = SchwartzFn.from_json(f.to_json())
    assert np.array_equal(f.coeffs, g.coeffs)
    assert json.loads(f.to_json())["basis"] == "hermite-2pi"


@pytest.mark.parametrize("payload", [
    "[]",
    '{"basis": "legendre", "coeffs": [[1, 0]]}',
    '{"basis": "hermite-2pi", "coeffs": []}',
    '{"basis": "hermite-2pi", "coeffs": [[1]]}',
    '{"basis": "hermite-2pi", "coeffs": [["a", 0]]}',
    '{"basis": "hermite-2pi"}',
])
def test_json_rejects_malformed(payload):
    with pytest.raises(ValueError):
        SchwartzFn.from_json(payload)


# evaluation and linear structure ------------------------------------------------

def test_gaussian_values():
    g = sw.gaussian()
    assert sw.evaluate(g, 0.0) == pytest.approx(1.0, abs=1e-15)
    x = np.linspace(-3, 3, 61)
    np.testing.assert_allclose(g(x).real, np.exp(-np.pi * x**2), atol=1e-15)


def test_eval_trivial_cases():
    assert sw.evaluate(sw.zero(), 1.7) == 0
    assert sw.evaluate(sw.basis(3), 0.0) == 0


def test_add_scale_identities(rng):
    f = random_fn(rng)
    assert sw.add(f, sw.zero()) == f
    assert sw.scale(0.0, f).is_zero()


@settings(max_examples=50, deadline=None)
@given(schwartz_fns(), schwartz_fns(), st.floats(-5, 5))
def test_add_pointwise(f, g, x):
    assert abs(sw.add(f, g)(x) - (f(x) + g(x))) <= 1e-12


def test_operator_sugar(rng):
    f, g = random_fn(rng), random_fn(rng)
    assert f - g == sw.add(f, sw.scale(-1, g))
    assert -f == sw.scale(-1, f)
    assert 2j * f == sw.scale(2j, f) == f * 2j


# ladder operators ------------------------------------------------------------

def test_derivative_of_gaussian():
    x = np.linspace(-3, 3, 121)
    got = sw.derivative(sw.gaussian())(x)
    np.testing.assert_allclose(got, -2 * np.pi * x * np.exp(-np.pi * x**2), atol=1e-10)


def test_derivative_of_h0():
    d = sw.derivative(sw.basis(0))
    np.testing.assert_allclose(d.coeffs, [0.0, -SQRT_2PI * math.sqrt(0.5)], atol=1e-12)
    # central-difference oracle on h_0
    h = 1e-5
    for x0 in (-0.7, 0.0, 0.4):
        fd = (sw.basis(0)(x0 + h) - sw.basis(0)(x0 - h)) / (2 * h)
        assert d(x0) == pytest.approx(fd, abs=1e-8)


def test_derivative_zero():
    assert sw.derivative(sw.zero()).is_zero()


def test_derivative_raises_degree(rng):
    f = sw.random_schwartz(rng, 10)
    assert sw.derivative(f).degree == 11


def test_mul_by_x_h0():
    np.testing.assert_allclose(sw.mul_by_x(sw.basis(0)).coeffs, [0.0, math.sqrt(0.5) / SQRT_2PI], atol=1e-12)
    # quadrature projection oracle
    x, dx = grid(8.0, 1e-3)
    h0 = sw.basis(0)(x).real
    h1 = sw.basis(1)(x).real
    assert sw.mul_by_x(sw.basis(0)).coeffs[1].real == pytest.approx(trapezoid(x * h0 * h1, dx), abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(schwartz_fns(), st.floats(-5, 5))
def test_mul_by_x_pointwise(f, x):
    assert abs(sw.mul_by_x(f)(x) - x * f(x)) <= 1e-11


@settings(max_examples=30, deadline=None)
@given(schwartz_fns(), st.lists(st.floats(-3, 3), min_size=1, max_size=4), st.floats(-2, 2))
def test_mul_by_poly_pointwise(f, poly, x):
    p = np.polynomial.polynomial.polyval(x, poly)
    assert abs(sw.mul_by_poly(f, poly)(x) - p * f(x)) <= 1e-10 * (1 + abs(p))


def test_mul_by_constant_one(rng):
    f = random_fn(rng)
    assert sw.mul_by_poly(f, [1.0]) == f


def test_derivative_matches_finite_difference(rng):
    f = sw.random_schwartz(rng, 12)
    w = np.array([1 / 280, -4 / 105, 1 / 5, -4 / 5, 0.0, 4 / 5, -1 / 5, 4 / 105, -1 / 280])
    h = 1e-3
    for x0 in np.linspace(-2, 2, 9):
        fd = np.dot(w, f(x0 + h * np.arange(-4, 5))) / h
        assert abs(sw.derivative(f)(x0) - fd) < 1e-9


# Fourier -------------------------------------------------------------------

def test_fourier_gaussian_fixed_point():
    g = sw.gaussian()
    assert sw.fourier(g) == g
    # direct quadrature of the Fourier integral
    x, dx = grid(8.0, 1e-3)
    for xi in (-1.3, 0.0, 0.45, 2.0):
        direct = trapezoid(np.exp(-2j * np.pi * x * xi) * np.exp(-np.pi * x**2), dx)
        assert abs(direct - sw.fourier(g)(xi)) < 1e-8


def test_fourier_inversion_exact(rng):
    f = sw.random_schwartz(rng, 64)
    assert np.array_equal(sw.inverse_fourier(sw.fourier(f)).coeffs, f.coeffs)


def test_fourier_period_four(rng):
    f = sw.random_schwartz(rng, 64)
    g = f
    for _ in range(4):
        g = sw.fourier(g)
    assert np.array_equal(g.coeffs, f.coeffs)


@settings(max_examples=50, deadline=None)
@given(schwartz_fns(64), schwartz_fns(64))
def test_fourier_symmetric(f, g):
    assert abs(sw.pairing(sw.fourier(f), g) - sw.pairing(f, sw.fourier(g))) <= 1e-13


@settings(max_examples=50, deadline=None)
@given(schwartz_fns(64))
def test_plancherel(f):
    assert abs(sw.l2_norm(sw.fourier(f)) - sw.l2_norm(f)) <= 1e-13


@settings(max_examples=30, deadline=None)
@given(schwartz_fns(32))
def test_fourier_diagonalizes_derivative(f):
    lhs = sw.fourier(sw.derivative(f))
    rhs = sw.scale(2j * math.pi, sw.mul_by_x(sw.fourier(f)))
    assert_coeffs_close(lhs, rhs, 1e-10)


# pairings ------------------------------------------------------------------

def test_pairing_basis():
    assert sw.pairing(sw.basis(2), sw.basis(2)) == 1
    assert sw.pairing(sw.basis(1), sw.basis(2)) == 0


def test_pairing_matches_quadrature(rng):
    x, dx = grid(8.0, 1e-3)
    for _ in range(5):
        f, g = sw.random_schwartz(rng, 8), sw.random_schwartz(rng, 8)
        assert abs(sw.pairing(f, g) - trapezoid(f(x) * g(x), dx)) < 1e-12
        assert abs(sw.inner(f, g) - trapezoid(np.conj(f(x)) * g(x), dx)) < 1e-12


def test_norms_of_fixtures():
    for n in (0, 3, 17):
        assert sw.l2_norm(sw.basis(n)) == 1
    assert sw.l2_norm(sw.gaussian()) == pytest.approx(2 ** -0.25, abs=1e-15)
    assert sw.pairing(sw.gaussian(), sw.basis(0)) == pytest.approx(2 ** -0.25, abs=1e-15)
    x, dx = grid(6.0, 1e-3)
    assert sw.l2_norm(sw.gaussian()) ** 2 == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert sw.l2_norm(sw.gaussian()) ** 2 == pytest.approx(trapezoid(np.exp(-2 * np.pi * x**2), dx), abs=1e-12)


# seminorms -----------------------------------------------------------------

def test_seminorm_zero():
    assert sw.seminorm(sw.zero(), (3, 2)) == 0.0


def test_seminorm_gaussian_closed_forms():
    g = sw.gaussian()
    assert sw.seminorm(g, (0, 0)) == pytest.approx(1.0, abs=1e-9)
    assert sw.seminorm(g, (1, 0)) == pytest.approx((2 * math.pi * math.e) ** -0.5, abs=1e-6)
    # sup |g'| = 2 pi x e^{-pi x^2} at x = 1/sqrt(2 pi): sqrt(2 pi / e)
    assert sw.seminorm(g, (0, 1)) == pytest.approx(math.sqrt(2 * math.pi / math.e), rel=1e-9)


def test_seminorm_large_weight_peak_inside_window():
    # sup x^10 e^{-pi x^2} at x^2 = 5/pi
    g = sw.gaussian()
    expected = (5 / math.pi) ** 5 * math.exp(-5)
    assert sw.seminorm(g, (10, 0)) == pytest.approx(expected, rel=1e-9)


def test_seminorm_index_validation():
    with pytest.raises(ValueError):
        SeminormIndex(-1, 0)
    assert SeminormIndex.of((2, 3)) == SeminormIndex(2, 3)


@settings(max_examples=25, deadline=None)
@given(schwartz_fns(12), schwartz_fns(12), st.integers(0, 3), st.integers(0, 3))
def test_seminorm_subadditive(f, g, k, n):
    assert sw.seminorm(f + g, (k, n)) <= sw.seminorm(f, (k, n)) + sw.seminorm(g, (k, n)) + 1e-8


@settings(max_examples=25, deadline=None)
@given(schwartz_fns(12), st.complex_numbers(max_magnitude=50, allow_nan=False, allow_infinity=False),
       st.integers(0, 3), st.integers(0, 3))
def test_seminorm_homogeneous(f, c, k, n):
    assert abs(sw.seminorm(sw.scale(c, f), (k, n)) - abs(c) * sw.seminorm(f, (k, n))) <= 1e-8 * (1 + abs(c))


def test_seminorm_against_brute_force(rng):
    from tempered.acceptance import brute_force_seminorm

    for _ in range(5):
        f = random_fn(rng, 10)
        idx = (int(rng.integers(0, 4)), int(rng.integers(0, 4)))
        est = sw.seminorm(f, idx)
        brute = brute_force_seminorm(f, idx, points=200_000)
        assert brute * (1 - 1e-10) <= est <= brute * 1.01
