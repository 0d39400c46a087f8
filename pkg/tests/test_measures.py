import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from avgrecon.errors import AsymmetricMeasure, BandwidthTooLarge, NegativeWeight, WeightsNotNormalized
from avgrecon.measures import (
    AveragingMeasure,
    experiment1_measure,
    experiment2_measure,
    inverse_w_derivatives,
    measure_from_spec,
    validate_measure,
    w_derivative,
)

PI = math.pi
F = Fraction


def test_point_mass_gamma():
    ctx = validate_measure(AveragingMeasure.point_mass(), PI / 2)
    assert ctx.gamma == 1.0
    single = AveragingMeasure.from_atoms([(0, 1)], sigma=0.3)
    assert validate_measure(single, PI / 2).gamma == pytest.approx(math.cos(0.3 * PI / 4), abs=1e-15)


def test_experiment2_gamma(exp2_ctx):
    assert exp2_ctx.gamma == pytest.approx(0.9238795, abs=1e-7)
    assert exp2_ctx.gamma == pytest.approx(math.cos(PI / 8), abs=1e-15)


def test_bandwidth_too_large():
    with pytest.raises(BandwidthTooLarge):
        validate_measure(experiment2_measure(), 2 * PI)
    wide = AveragingMeasure.from_atoms([(F(-1), F(1, 2)), (F(1), F(1, 2))], sigma=2)
    with pytest.raises(BandwidthTooLarge):
        validate_measure(wide, PI / 2)


def test_rejects_bad_measures():
    with pytest.raises(AsymmetricMeasure):
        validate_measure(AveragingMeasure.from_atoms([(F(-1, 8), F(1, 2)), (F(1, 4), F(1, 2))], sigma=F(1, 2)), 1.0)
    with pytest.raises(AsymmetricMeasure):
        validate_measure(AveragingMeasure.from_atoms([(F(-1, 8), F(1, 4)), (F(1, 8), F(3, 4))], sigma=F(1, 2)), 1.0)
    with pytest.raises(WeightsNotNormalized):
        validate_measure(AveragingMeasure.from_atoms([(F(0), F(1, 2))], sigma=F(1, 2)), 1.0)
    with pytest.raises(NegativeWeight):
        validate_measure(
            AveragingMeasure.from_atoms([(F(-1, 8), F(-1, 4)), (F(0), F(3, 2)), (F(1, 8), F(-1, 4))], sigma=F(1, 4)), 1.0
        )


def test_exact_weights_from_strings():
    m = measure_from_spec([["-1/8", "1/12"], ["-1/16", "1/12"], ["0", "2/3"], ["1/16", "1/12"], ["1/8", "1/12"]], "1/4")
    assert m == experiment1_measure()
    validate_measure(m, PI / 2)


def test_w_examples(exp2_ctx):
    assert w_derivative(exp2_ctx, 0, 0.0) == 1.0
    assert w_derivative(exp2_ctx, 0, PI / 2) == pytest.approx(0.75 + math.cos(PI / 8) / 4, abs=1e-15)
    assert w_derivative(exp2_ctx, 0, PI / 2) == pytest.approx(0.9809699, abs=1e-7)
    h = 1e-6
    fd = (w_derivative(exp2_ctx, 0, PI / 2 + h) - w_derivative(exp2_ctx, 0, PI / 2 - h)) / (2 * h)
    assert w_derivative(exp2_ctx, 1, PI / 2) == pytest.approx(fd, rel=1e-8)
    assert w_derivative(exp2_ctx, 1, PI / 2) == pytest.approx(-math.sin(PI / 8) / 16, abs=1e-15)


@pytest.mark.parametrize("measure", [experiment1_measure(), experiment2_measure(), AveragingMeasure.uniform(0.6)])
def test_w_bounds_on_band(measure):
    ctx = validate_measure(measure, 2.0)
    xi = np.linspace(-ctx.delta, ctx.delta, 1001)
    w = w_derivative(ctx, 0, xi)
    assert np.all(w >= ctx.gamma - 1e-15)
    assert np.all(w <= 1 + 1e-15)


def test_uniform_density_matches_closed_form():
    ctx = validate_measure(AveragingMeasure.uniform(0.8), 2.5)
    xi = np.linspace(-PI, PI, 101)
    exact = np.sinc(0.8 * xi / 2 / PI)  # sin(sigma xi/2)/(sigma xi/2)
    assert np.max(np.abs(w_derivative(ctx, 0, xi) - exact)) <= 1e-14
    # W'(xi) = (cos(a) - sin(a)/a) / xi with a = sigma xi / 2
    a = 0.4 * 1.3
    assert w_derivative(ctx, 1, 1.3) == pytest.approx((math.cos(a) - math.sin(a) / a) / 1.3, abs=1e-14)


@settings(max_examples=60, deadline=None)
@given(st.floats(-PI, PI), st.sampled_from([0, 1, 2, 3]))
def test_parity(xi, j):
    ctx = validate_measure(experiment1_measure(), PI / 2)
    sign = (-1) ** j
    assert w_derivative(ctx, j, xi) == pytest.approx(sign * w_derivative(ctx, j, -xi), abs=1e-15)


@settings(max_examples=60, deadline=None)
@given(st.floats(-10, 10), st.integers(0, 12))
def test_derivative_magnitude_bound(xi, j):
    for m in (experiment1_measure(), experiment2_measure(), AveragingMeasure.uniform(0.5)):
        ctx = validate_measure(m, 1.0)
        assert abs(w_derivative(ctx, j, xi)) <= (ctx.sigma / 2) ** j * (1 + 1e-14)


@pytest.mark.parametrize("j", [1, 2, 3, 4])
def test_derivatives_match_finite_differences(j):
    ctx = validate_measure(experiment2_measure(), PI / 2)
    h = 1e-4
    for xi in (0.3, 1.1, -2.0):
        fd = (w_derivative(ctx, j - 1, xi + h) - w_derivative(ctx, j - 1, xi - h)) / (2 * h)
        exact = w_derivative(ctx, j, xi)
        assert abs(fd - exact) <= 1e-6 * max(abs(exact), 1e-3)


def test_inverse_derivatives_leibniz(exp2_ctx):
    # compare against finite differences of 1/W
    h = 1e-3
    inv = lambda x: 1 / w_derivative(exp2_ctx, 0, x)
    d = inverse_w_derivatives(exp2_ctx, 2, PI / 2)
    assert d[1] == pytest.approx((inv(PI / 2 + h) - inv(PI / 2 - h)) / (2 * h), rel=1e-5)
    assert d[2] == pytest.approx((inv(PI / 2 + h) - 2 * inv(PI / 2) + inv(PI / 2 - h)) / h**2, rel=1e-5)
