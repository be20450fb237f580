import numpy as np
from lv_waves.numerics import Grid, WaveProfile
from lv_waves.verification import monotonicity_certificate

from ..conftest import SMALL_BRANCH


def test_computed_wave_is_strictly_increasing(small_wave):
    report = monotonicity_certificate(small_wave.profile, SMALL_BRANCH, 2.0)
    assert report.passed
    assert report.failing_count == {"u": 0, "v": 0}
    assert report.min_difference["u"] > 0
    assert report.derivative_residual is not None
    assert max(report.derivative_residual) < 1e-2


def test_plateau_is_reported():
    grid = Grid.from_spacing(2.0, 0.5)
    u = np.array([0.1, 0.2, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8])
    report = monotonicity_certificate(WaveProfile.from_arrays(grid, u, u))
    assert not report.passed
    assert report.failing_nodes["u"] == [1]
    assert report.as_dict()["passed"] is False


def test_saturated_nodes_are_skipped():
    grid = Grid.from_spacing(2.0, 0.5)
    u = np.array([0.1, 0.2, 0.3, 0.4, 0.5, 0.9, 1.0, 1.0, 1.0])
    report = monotonicity_certificate(WaveProfile.from_arrays(grid, u, u))
    assert report.passed
    assert report.saturated["u"] == 2
    assert report.derivative_residual is None
