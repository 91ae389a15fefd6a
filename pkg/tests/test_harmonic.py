import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from kamvar.circlemap import arnold
from kamvar.errors import ResonanceError
from kamvar.harmonic import SampleGrid, TrigSeries, estimate_coeffs, sample, small_divisors, solve_homological

AMP = 0.5 / (2 * math.pi)
GOLDEN = (1 + math.sqrt(5)) / 2


def test_sample_examples():
    np.testing.assert_array_equal(sample(lambda x: 0.7, 4).values, [0.7] * 4)
    grid = sample(lambda x: AMP * np.sin(2 * np.pi * x), 4)
    np.testing.assert_allclose(grid.values, [AMP, 0, -AMP, 0], atol=1e-16)
    np.testing.assert_array_equal(grid.points, [0.25, 0.5, 0.75, 1.0])
    assert not sample(arnold(0.3, 0.0).eta, 16).values.any()
    with pytest.raises(ValueError):
        sample(lambda x: x, 1)


def test_estimate_sine():
    series = estimate_coeffs(sample(lambda x: AMP * np.sin(2 * np.pi * x), 64), 10)
    assert abs(series.coefficient(1)) == pytest.approx(0.5 / (4 * math.pi), abs=1e-16)
    assert series.coefficient(1) == pytest.approx(AMP / 2j, abs=1e-16)
    assert abs(series.coefficient(0)) < 1e-16
    assert max(abs(series.coefficient(j)) for j in range(2, 11)) < 1e-15


def test_estimate_constant_and_cosine():
    const = estimate_coeffs(sample(lambda x: 0.7, 64), 10)
    assert const.coefficient(0) == pytest.approx(0.7, abs=1e-15)
    assert max(abs(const.coefficient(j)) for j in range(-10, 11) if j) < 1e-15
    cos2 = estimate_coeffs(sample(lambda x: np.cos(4 * np.pi * x), 64), 10)
    assert abs(cos2.coefficient(2)) == pytest.approx(0.5, abs=1e-15)
    assert abs(cos2.coefficient(-2)) == pytest.approx(0.5, abs=1e-15)
    assert max(abs(cos2.coefficient(j)) for j in range(-10, 11) if abs(j) != 2) < 1e-15


def test_estimate_matches_quadrature_for_smooth_function():
    # independent oracle: adaptive quadrature of f(x) e^{-2 pi i j x}
    f = lambda x: np.exp(np.sin(2 * np.pi * x)) * 0.1
    series = estimate_coeffs(sample(f, 256), 6)
    for j in range(-6, 7):
        re = quad(lambda x: f(x) * np.cos(2 * np.pi * j * x), 0, 1, epsabs=1e-14)[0]
        im = quad(lambda x: -f(x) * np.sin(2 * np.pi * j * x), 0, 1, epsabs=1e-14)[0]
        assert series.coefficient(j) == pytest.approx(complex(re, im), abs=1e-13)


def test_estimate_guard():
    with pytest.raises(ValueError, match="2N\\+1 <= S"):
        estimate_coeffs(sample(lambda x: x * 0, 20), 10)


@st.composite
def trig_polys(draw):
    d = draw(st.integers(0, 8))
    parts = st.floats(-1, 1)
    c = {0: complex(draw(parts), 0)}
    for j in range(1, d + 1):
        c[j] = complex(draw(parts), draw(parts))
        c[-j] = c[j].conjugate()
    return d, TrigSeries.from_modes(c)


@given(trig_polys())
@settings(max_examples=60, deadline=None)
def test_quadrature_exact_for_trig_polynomials(poly):
    d, series = poly
    S = 2 * d + 2
    est = estimate_coeffs(sample(series, max(S, 2 * d + 1)), d)
    for j in range(-d, d + 1):
        assert abs(est.coefficient(j) - series.coefficient(j)) < 1e-13


@given(trig_polys(), st.floats(-3, 3))
@settings(max_examples=60, deadline=None)
def test_hermitian_series_evaluates_real(poly, x):
    _, series = poly
    assert series.is_hermitian()
    assert abs(series.complex_value(x).imag) < 1e-10


def test_derivative_matches_finite_difference():
    s = TrigSeries.from_modes({1: 0.2 - 0.1j, -1: 0.2 + 0.1j, 3: 0.05j, -3: -0.05j})
    xs = np.linspace(0, 1, 33)
    step = 1e-6
    fd = (s(xs + step) - s(xs - step)) / (2 * step)
    np.testing.assert_allclose(s.derivative(xs), fd, atol=1e-8)


def test_solve_homological_closed_form():
    eta = estimate_coeffs(sample(lambda x: AMP * np.sin(2 * np.pi * x), 64), 10)
    h = solve_homological(eta, math.e)
    xs = np.linspace(0, 1, 1001)
    exact = -AMP * np.cos(2 * np.pi * xs - math.e * math.pi) / (2 * math.sin(math.e * math.pi))
    assert np.max(np.abs(h(xs) - exact)) < 1e-9
    assert h.coefficient(0) == 0


def test_solve_homological_zero_and_single_mode():
    zero = solve_homological(TrigSeries.zero(5), math.e)
    assert not zero.coeffs.any()
    h = solve_homological(TrigSeries.from_modes({1: 1.0}), 0.25)
    assert h.coefficient(1) == pytest.approx(1 / (-1 + 1j), abs=1e-15)
    assert abs(h.coefficient(1)) == pytest.approx(1 / math.sqrt(2), abs=1e-15)


@given(trig_polys(), st.floats(0.05, 0.95), st.integers(0, 4))
@settings(max_examples=60, deadline=None)
def test_homological_residual(poly, frac, whole):
    _, eta = poly
    alpha = whole + frac
    if min(small_divisors(alpha, max(eta.modes, 1)).magnitudes) < 1e-3:
        return
    h = solve_homological(eta, alpha)
    xs = np.arange(256) / 256
    lhs = h(xs + alpha) - h(xs)
    rhs = eta(xs) - eta.coefficient(0).real
    assert np.max(np.abs(lhs - rhs)) < 1e-9


def test_resonance_error_names_mode():
    eta = TrigSeries.from_modes({2: 0.1, -2: 0.1})
    with pytest.raises(ResonanceError) as info:
        solve_homological(eta, 0.5)
    assert info.value.mode in (-2, 2)
    assert info.value.distance == 0.0


def test_small_divisor_examples():
    rep = small_divisors(math.e, 1)
    assert rep.magnitudes[0] == pytest.approx(1.5478853705334165565, abs=1e-12)
    half = small_divisors(0.5, 2)
    assert half.flagged == (2,)
    assert half.magnitude(2) < 1e-8


def test_golden_divisors_consistent_with_type_two():
    # |e^{2 pi i j a} - 1| = 2 sin(pi ||j a||) >= 4 ||j a||, and j ||j a|| >= 1/phi^2 for the golden ratio
    rep = small_divisors(GOLDEN, 10)
    for j in range(1, 11):
        dist = abs(j * GOLDEN - round(j * GOLDEN))
        assert j * dist >= (2 - GOLDEN) - 1e-12
        assert rep.magnitude(j) >= 4 * (2 - GOLDEN) / j


@given(st.floats(-10, 10), st.integers(1, 30))
@settings(max_examples=60, deadline=None)
def test_divisor_sine_identity(alpha, N):
    rep = small_divisors(alpha, N)
    for j in range(1, N + 1):
        assert abs(rep.magnitude(j) - 2 * abs(math.sin(math.pi * j * alpha))) < 1e-12


def test_sample_grid_is_right_endpoint():
    grid = SampleGrid(4, np.zeros(4))
    assert grid.points[-1] == 1.0 and grid.points[0] == 0.25
