import math

import pytest
from lv_waves.layers import InMemorySnapshotLayer, register_snapshot_layer
from lv_waves.params import ModelParams
from lv_waves.pipeline import run_wave

SMALL_BRANCH = ModelParams(a1=0.5, a2=2.0, r=0.5)
LARGE_BRANCH = ModelParams(a1=0.2, a2=2.0, r=2.0)
H3_FAILS = ModelParams(a1=0.5, a2=2.0, r=5.0)


@pytest.fixture(scope="session")
def small_branch():
    return SMALL_BRANCH


@pytest.fixture(scope="session")
def large_branch():
    return LARGE_BRANCH


@pytest.fixture(scope="session")
def small_wave():
    """Supercritical wave at (0.5, 2, 0.5), c = 2, on the default grid."""
    return run_wave(SMALL_BRANCH, 2.0)


@pytest.fixture(scope="session")
def large_wave():
    return run_wave(LARGE_BRANCH, 2.0)


@pytest.fixture(scope="session")
def critical_wave():
    """Wave at the minimal speed sqrt(2) of (0.5, 2, 0.5)."""
    return run_wave(SMALL_BRANCH, math.sqrt(2.0))


def pytest_configure():
    register_snapshot_layer("inmemory", InMemorySnapshotLayer())
