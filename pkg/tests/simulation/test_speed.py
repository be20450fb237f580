import numpy as np
import pytest
from lv_waves.simulation import SimTrace, TranslationReport, estimate_speed, wave_translation_test

from ..conftest import SMALL_BRANCH


def linear_trace(speed, noise=0.0):
    times = np.linspace(0.0, 50.0, 101)
    rng = np.random.default_rng(1)
    fronts = 10.0 + speed * times + noise * rng.standard_normal(times.size)
    x = np.linspace(0.0, 200.0, 2001)
    return SimTrace(x=x, times=times, fronts=fronts, u=np.zeros(x.size), v=np.zeros(x.size))


def test_estimate_speed_of_linear_front():
    estimate = estimate_speed(linear_trace(1.5))
    assert estimate.speed == pytest.approx(1.5, rel=1e-10)
    assert estimate.samples == 50
    assert estimate.stderr < 1e-8


def test_noise_widens_the_band():
    estimate = estimate_speed(linear_trace(1.5, noise=0.1), burn_in_fraction=0.0)
    lo, hi = estimate.band
    assert estimate.speed == pytest.approx(1.5, abs=0.01)
    assert hi - lo > 0
    assert estimate.as_dict()["samples"] == 101


def test_zero_time_translation_is_trivial(small_wave):
    report = wave_translation_test(SMALL_BRANCH, 2.0, small_wave.profile, T=0.0)
    assert report.realized_speed is None
    assert report.shape_error == 0.0
    assert report.passed


def test_report_fails_on_wrong_claim():
    report = TranslationReport(
        c=2.0, claimed_speed=2.2, T=20.0, realized_speed=2.0, shape_error=1e-3, best_shift=40.0
    )
    assert report.speed_error == pytest.approx(0.2 / 2.2)
    assert not report.passed


def test_wave_translates_rigidly(small_wave):
    report = wave_translation_test(SMALL_BRANCH, 2.0, small_wave.profile, T=20.0)
    assert report.realized_speed == pytest.approx(2.0, rel=0.02)
    assert report.shape_error < 1e-2
    assert report.passed
