import math

import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st

from ruinlab._errors import DivergentMgf, QuadratureFailure, SpecError
from ruinlab._jumps import (
    ALL,
    BIG,
    LOG_BIG,
    LOG_SMALL,
    SMALL,
    DoubleExponential,
    Exponential,
    Gaussian,
    PointMass,
    TemperedSide,
    expect,
    quad,
    size_kind,
)
from ruinlab._rng import RngStream, Substream
from ruinlab._weights import WeightTable

# Regions

def test_regions_split_the_line():
    """Every point is in exactly one of SMALL and BIG"""
    for x in (-5.0, -1.0, -0.3, 0.0, 0.9, 1.0, 1.0001, 12.0):
        assert SMALL.contains(x) != BIG.contains(x)
        assert ALL.contains(x)

def test_log_regions_follow_log_of_one_plus_x():
    for x in (-0.9, -0.5, 0.0, 1.0, 2.0, 5.0):
        assert LOG_SMALL.contains(x) == (abs(math.log1p(x)) <= 1.0)
        assert LOG_BIG.contains(x) == (abs(math.log1p(x)) > 1.0)

# Quadrature

def test_quad_matches_closed_form():
    assert quad(lambda x: math.exp(-x), 0.0, math.inf) == pytest.approx(1.0, rel=1e-10)

def test_quad_empty_interval_is_zero():
    assert quad(lambda x: 1.0, 2.0, 1.0) == 0.0

def test_quad_divergent_integral_raises():
    with pytest.raises(QuadratureFailure):
        quad(lambda x: 1.0 / x, 0.0, 1.0)

# Jump-size laws

def test_exponential_moments():
    size = Exponential(1.0)
    assert expect(size, lambda x: x) == pytest.approx(1.0, rel=1e-9)
    assert size.tail_mean() == pytest.approx(expect(size, lambda x: x, BIG), rel=1e-8)
    assert size.mgf_neg(1.0) == pytest.approx(0.5)

def test_gaussian_second_moment_and_tail_mean():
    size = Gaussian(0.3, 1.2)
    assert expect(size, lambda x: x * x) == pytest.approx(0.3**2 + 1.2**2, rel=1e-8)
    assert size.tail_mean() == pytest.approx(expect(size, lambda x: x, BIG), rel=1e-7)

def test_double_exponential_signs_and_mgf():
    size = DoubleExponential(0.4, 3.0, 2.0)
    assert expect(size, lambda x: 1.0) == pytest.approx(1.0, rel=1e-9)
    assert expect(size, lambda x: x) == pytest.approx(0.4 / 3.0 - 0.6 / 2.0, rel=1e-8)
    assert size.tail_mean() == pytest.approx(expect(size, lambda x: x, BIG), rel=1e-7)
    assert size.alpha_max == 2.0
    assert size.mgf_neg(1.0) == pytest.approx(0.4 * 3.0 / 4.0 + 0.6 * 2.0 / 1.0)

def test_double_exponential_mgf_diverges_at_edge():
    with pytest.raises(DivergentMgf):
        DoubleExponential(0.0, 5.0, 4.0).mgf_neg(4.0)

def test_one_sided_double_exponential_support():
    assert DoubleExponential(0.0, 5.0, 4.0).support == (-math.inf, 0.0)
    assert DoubleExponential(1.0, 5.0, 4.0).support == (0.0, math.inf)
    assert DoubleExponential(1.0, 5.0, 4.0).alpha_max == math.inf

def test_point_mass_respects_closed_regions():
    assert expect(PointMass(1.0), lambda x: x, SMALL) == 1.0
    assert expect(PointMass(1.0), lambda x: x, BIG) == 0.0
    assert PointMass(-1.5).tail_mean() == -1.5

@pytest.mark.parametrize("build", [
    lambda: Exponential(0.0),
    lambda: DoubleExponential(1.5, 1.0, 1.0),
    lambda: DoubleExponential(0.5, -1.0, 1.0),
    lambda: Gaussian(0.0, 0.0),
    lambda: PointMass(math.inf),
])
def test_invalid_sizes_raise_spec_error(build):
    with pytest.raises(SpecError):
        build()

def test_size_kind_names():
    assert size_kind(Exponential(1.0)) == "exponential"
    assert size_kind(DoubleExponential(0.5, 1.0, 1.0)) == "double_exponential"
    assert size_kind(PointMass(0.1)) == "point_mass"

@given(st.floats(min_value=0.1, max_value=5.0), st.floats(min_value=0.1, max_value=5.0))
def test_scaled_exponential_has_scaled_mean(rate, k):
    assert expect(Exponential(rate).scaled(k), lambda x: x) == pytest.approx(k / rate, rel=1e-7)

# Tempered-stable sides

def test_finite_activity_side_rate_is_gamma_closed_form():
    side = TemperedSide(c=1.0, lam=2.0, alpha=-1.0, sign=-1.0)
    assert side.finite_activity
    assert side.rate(0.0) == pytest.approx(0.5)
    assert side.rate(0.0) == pytest.approx(side.integral(lambda x: 1.0), rel=1e-8)
    assert side.cutoff(0.01) == 0.0

def test_finite_activity_side_samples_negative_sizes():
    side = TemperedSide(c=1.0, lam=2.0, alpha=-1.0, sign=-1.0)
    rng = RngStream(3, 0).generator(Substream.R_JUMPS)
    times, sizes = side.sample(rng, 1000.0, 0.01)
    assert np.all(sizes < 0)
    assert np.all(np.diff(times) >= 0)
    assert times.size == pytest.approx(500, abs=5 * math.sqrt(500))

def test_thinned_side_matches_truncated_intensity():
    side = TemperedSide(c=1.0, lam=2.0, alpha=0.5, sign=1.0)
    eps, horizon = 0.01, 200.0
    expected = horizon * side.rate(eps)
    rng = RngStream(11, 0).generator(Substream.R_JUMPS)
    times, sizes = side.sample(rng, horizon, eps)
    assert sizes.size == pytest.approx(expected, abs=5 * math.sqrt(expected))
    assert np.all(sizes >= eps)
    assert np.all((times >= 0) & (times <= horizon))

def test_thinned_side_mean_size():
    side = TemperedSide(c=1.0, lam=1.0, alpha=0.0, sign=-1.0)
    eps, horizon = 0.05, 500.0
    rng = RngStream(5, 1).generator(Substream.R_JUMPS)
    _, sizes = side.sample(rng, horizon, eps)
    mean = side.integral(lambda x: x, lo=eps) / side.rate(eps)
    se = np.std(sizes) / math.sqrt(sizes.size)
    assert np.mean(sizes) == pytest.approx(mean, abs=5 * se)

# Random streams

def test_streams_replay_and_separate():
    a = RngStream(42, 7).generator(Substream.R_NOISE).standard_normal(5)
    b = RngStream(42, 7).generator(Substream.R_NOISE).standard_normal(5)
    c = RngStream(42, 7).generator(Substream.X_NOISE).standard_normal(5)
    d = RngStream(42, 8).generator(Substream.R_NOISE).standard_normal(5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)

@pytest.mark.parametrize("seed, index", [(-1, 0), (2**64, 0), (1, -1)])
def test_stream_rejects_bad_keys(seed, index):
    with pytest.raises(ValueError):
        RngStream(seed, index)

# Weight tables

def test_weight_table_exact_integrals():
    g = WeightTable((0.0, 1.0, 2.0), (1.0, 2.0, 2.0))
    assert g.integral(0.0, 2.0) == pytest.approx(3.5)
    assert g.integral(0.0, 2.0, power=2) == pytest.approx(7.0 / 3.0 + 4.0)
    assert g.integral(0.5, 1.5) == pytest.approx(quad(lambda s: float(g(s)), 0.5, 1.5), rel=1e-10)

def test_weight_table_extension():
    g = WeightTable((0.0, 1.0, 2.0), (1.0, 2.0, 2.0))
    assert g.integral(0.0, 3.0, extend=True) == pytest.approx(5.5)
    assert float(g(10.0, extend=True)) == 2.0
    with pytest.raises(ValueError):
        g(2.5)
    with pytest.raises(ValueError):
        g.integral(0.0, 3.0)

def test_weight_table_vectorized_integral():
    g = WeightTable((0.0, 2.0), (1.0, 3.0))
    a = np.array([0.0, 0.5, 1.0])
    b = np.array([0.5, 1.0, 2.0])
    parts = g.integral(a, b)
    assert parts.shape == (3,)
    assert parts.sum() == pytest.approx(g.integral(0.0, 2.0))

@pytest.mark.parametrize("knots, values", [
    ((0.0,), (1.0,)),
    ((0.5, 1.0), (1.0, 1.0)),
    ((0.0, 1.0, 1.0), (1.0, 1.0, 1.0)),
    ((0.0, 1.0), (1.0, 0.0)),
    ((0.0, 1.0), (1.0,)),
])
def test_weight_table_validation(knots, values):
    with pytest.raises(SpecError):
        WeightTable(knots, values)
