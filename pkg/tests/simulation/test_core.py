import math

import numpy as np
import pytest
from lv_waves.exceptions import DomainTooShort, SimulationBlowUp, ValidationError
from lv_waves.layers import InMemorySnapshotLayer
from lv_waves.params import ModelParams
from lv_waves.simulation import SimConfig, estimate_speed, simulate
from lv_waves.simulation.core import diffusion_operator, initial_fields, laplacian

from ..conftest import SMALL_BRANCH


def test_config_validation():
    with pytest.raises(ValidationError):
        SimConfig(dx=0.0)
    with pytest.raises(ValidationError):
        SimConfig(level=1.5)
    with pytest.raises(ValidationError, match="explicit"):
        SimConfig(scheme="explicit", dx=0.1, dt=0.1)
    with pytest.raises(ValidationError):
        SimConfig(init="wave")


def test_step_initial_data():
    cfg = SimConfig(X=20.0, dx=0.5, T=1.0)
    u, v = initial_fields(cfg)
    assert u[0] == 1.0 and u[-1] == 0.0
    np.testing.assert_array_equal(u + v, 1.0)


def test_smoothed_step_initial_data():
    cfg = SimConfig(X=20.0, dx=0.5, T=1.0, init="smoothed_step")
    u, v = initial_fields(cfg)
    assert u[10] == pytest.approx(0.5)  # x = 5
    assert np.all(np.diff(u) < 0)
    assert np.all((u > 0.0) & (u < 1.0))
    np.testing.assert_allclose(u + v, 1.0)


def test_smoothed_step_run_stays_in_box():
    cfg = SimConfig(X=20.0, dx=0.1, dt=0.05, T=2.0, init="smoothed_step")
    trace = simulate(SMALL_BRANCH, cfg)
    assert trace.u.min() >= -1e-9 and trace.u.max() <= 1.0 + 1e-9
    assert trace.fronts[-1] > trace.fronts[0]


def test_diffusion_operator_conserves_mass():
    # Neumann ends: the column sums of I - k D2 with trapezoid weights are 1
    n, k = 11, 0.3
    ab = diffusion_operator(n, k)
    dense = np.zeros((n, n))
    for i in range(n):
        dense[i, i] = ab[1, i]
        if i + 1 < n:
            dense[i, i + 1] = ab[0, i + 1]
            dense[i + 1, i] = ab[2, i]
    weights = np.ones(n)
    weights[[0, -1]] = 0.5
    np.testing.assert_allclose(weights @ dense, weights)


def test_laplacian_of_linear_field_vanishes_inside():
    x = np.linspace(0.0, 1.0, 11)
    fields = np.stack([x, 2.0 * x], axis=1)
    lap = laplacian(fields, 0.1)
    np.testing.assert_allclose(lap[1:-1], 0.0, atol=1e-9)


def test_constant_state_is_stationary():
    cfg = SimConfig(X=10.0, dx=0.1, dt=0.1, T=2.0)
    n = cfg.n
    trace = simulate(SMALL_BRANCH, cfg, initial=(np.ones(n), np.zeros(n)))
    np.testing.assert_allclose(trace.u, 1.0, atol=1e-12)
    np.testing.assert_allclose(trace.v, 0.0, atol=1e-12)
    assert np.all(np.isnan(trace.fronts))


@pytest.mark.parametrize("scheme,dt", [("imex", 0.05), ("explicit", 0.004)])
def test_fields_stay_in_box(scheme, dt):
    cfg = SimConfig(X=40.0, dx=0.1, dt=dt, T=5.0, scheme=scheme)
    trace = simulate(SMALL_BRANCH, cfg)
    assert trace.u.min() >= -1e-12 and trace.u.max() <= 1.0 + 1e-12
    assert trace.v.min() >= -1e-12 and trace.v.max() <= 1.0 + 1e-12


def test_blow_up_reports_last_valid_time():
    cfg = SimConfig(X=1.0, dx=0.5, dt=1.0, T=20.0)
    n = cfg.n
    # a huge negative u makes the logistic term explode
    with pytest.raises(SimulationBlowUp) as excinfo:
        simulate(ModelParams(0.5, 2.0, 0.5), cfg, initial=(np.full(n, -1e100), np.zeros(n)))
    assert excinfo.value.last_valid_time >= 0.0


def test_snapshots_are_dropped_when_channel_is_full():
    layer = InMemorySnapshotLayer(capacity=2)
    cfg = SimConfig(X=10.0, dx=0.1, dt=0.1, T=1.0, snapshot_every=2)
    trace = simulate(SMALL_BRANCH, cfg, layer, "snapshots")
    assert len(trace.snapshot_times) == 6
    assert trace.dropped_snapshots == 4
    assert layer.pending["snapshots"] == 2


def test_spreading_speed_matches_minimal_speed():
    cfg = SimConfig(X=400.0, dx=0.1, dt=0.1, T=200.0)
    trace = simulate(SMALL_BRANCH, cfg)
    estimate = estimate_speed(trace, 0.5)
    assert estimate.speed == pytest.approx(math.sqrt(2.0), rel=0.05)
    assert trace.speed is estimate
    lo, hi = estimate.band
    assert lo <= estimate.speed <= hi


def test_domain_too_short():
    cfg = SimConfig(X=20.0, dx=0.1, dt=0.1, T=40.0)
    trace = simulate(SMALL_BRANCH, cfg)
    with pytest.raises(DomainTooShort):
        estimate_speed(trace)


def test_speed_needs_samples():
    cfg = SimConfig(X=20.0, dx=0.1, dt=0.1, T=1.0)
    trace = simulate(SMALL_BRANCH, cfg)
    with pytest.raises(ValidationError):
        estimate_speed(trace, 0.5)
