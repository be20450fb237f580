import math

import numpy as np
import pytest
from lv_waves.asymptotics import compare_rates, default_window, fit_decay, tail_quantity
from lv_waves.exceptions import FitWindowError
from lv_waves.numerics import Grid, WaveProfile

from .conftest import LARGE_BRANCH, SMALL_BRANCH


def synthetic_profile(rate_minus, rate_plus, L=60.0, h=0.05, polynomial=False):
    grid = Grid.from_spacing(L, h)
    xi = grid.nodes
    left = np.exp(rate_minus * np.minimum(xi, 0.0)) / 2.0
    if polynomial:
        left = left * np.abs(np.minimum(xi, 0.0))
    right = 1.0 - np.exp(-rate_plus * np.maximum(xi, 0.0)) / 2.0
    w = np.where(xi < 0, left, right)
    return WaveProfile.from_arrays(grid, w, w)


def by_key(comparisons):
    return {(item.end, item.component): item for item in comparisons}


def test_tail_quantity():
    profile = synthetic_profile(0.5, 0.5)
    np.testing.assert_array_equal(tail_quantity(profile, "minus_inf", "u"), profile.u.values)
    np.testing.assert_array_equal(tail_quantity(profile, "plus_inf", "v"), 1.0 - profile.v.values)


def test_default_window():
    grid = Grid.from_spacing(60.0, 0.05)
    assert default_window(grid, "minus_inf") == (-55.0, -35.0)
    assert default_window(grid, "plus_inf") == (35.0, 55.0)


def test_default_window_kept_for_small_positive_tail():
    profile = synthetic_profile(0.7, 0.5)
    quantity = tail_quantity(profile, "minus_inf", "u")
    assert quantity[profile.grid.nodes <= -50.0].max() < 1e-12
    assert default_window(profile.grid, "minus_inf", quantity) == (-55.0, -35.0)
    assert fit_decay(profile, "minus_inf", "u").window == (-55.0, -35.0)


def test_default_window_slides_away_from_floor():
    grid = Grid.from_spacing(60.0, 0.05)
    quantity = np.where(grid.nodes > 40.0, 0.0, 1.0)
    lo, hi = default_window(grid, "plus_inf", quantity)
    assert hi <= 40.0
    assert lo >= 5.0


def test_exact_exponential_rates():
    profile = synthetic_profile(0.3, 0.2)
    left = fit_decay(profile, "minus_inf", "u")
    right = fit_decay(profile, "plus_inf", "u")
    assert left.rate == pytest.approx(0.3, rel=1e-9)
    assert right.rate == pytest.approx(0.2, rel=1e-6)
    assert not left.polynomial_detected
    assert left.fit_residual < 1e-9


def test_polynomial_factor_is_detected():
    profile = synthetic_profile(0.5, 0.5, polynomial=True)
    fit = fit_decay(profile, "minus_inf", "u")
    assert fit.polynomial_detected
    assert fit.log_coefficient == pytest.approx(1.0, abs=0.05)
    assert fit.rate == pytest.approx(0.5, rel=0.01)


def test_small_window_is_rejected():
    profile = synthetic_profile(0.5, 0.5)
    with pytest.raises(FitWindowError):
        fit_decay(profile, "minus_inf", "u", window=(-50.0, -49.8))


def test_nonpositive_quantity_is_rejected():
    grid = Grid.from_spacing(60.0, 0.05)
    profile = WaveProfile.constant(grid, 1.0, 1.0)
    with pytest.raises(FitWindowError, match="equilibrium"):
        fit_decay(profile, "plus_inf", "u", window=(35.0, 55.0))


def test_small_branch_rates(small_wave):
    comparisons = by_key(small_wave.comparisons)
    assert comparisons["minus_inf", "u"].fitted == pytest.approx((2 - math.sqrt(2)) / 2, rel=0.02)
    for component in ("u", "v"):
        assert comparisons["plus_inf", component].fitted == pytest.approx(
            (math.sqrt(6) - 2) / 2, rel=0.02
        )


def test_large_branch_rates(large_wave):
    comparisons = by_key(large_wave.comparisons)
    assert comparisons["plus_inf", "u"].fitted == pytest.approx((math.sqrt(8) - 2) / 2, rel=0.03)
    assert comparisons["plus_inf", "v"].fitted == pytest.approx((math.sqrt(12) - 2) / 2, rel=0.03)


def test_critical_rates(critical_wave):
    comparisons = by_key(compare_rates(critical_wave.profile, SMALL_BRANCH, math.sqrt(2.0), 0.03))
    left = comparisons["minus_inf", "u"]
    assert left.polynomial_detected
    assert left.fitted == pytest.approx(math.sqrt(0.5), rel=0.03)
    assert comparisons["plus_inf", "u"].fitted == pytest.approx(1 - math.sqrt(0.5), rel=0.03)


def test_comparison_order_and_report(large_wave):
    comparisons = compare_rates(large_wave.profile, LARGE_BRANCH, 2.0, 0.03)
    keys = [(item.end, item.component) for item in comparisons]
    assert keys == [("minus_inf", "u"), ("minus_inf", "v"), ("plus_inf", "u"), ("plus_inf", "v")]
    record = comparisons[0].as_dict()
    assert set(record) >= {"predicted", "fitted", "relative_error", "passed"}
