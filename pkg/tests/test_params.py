import math

import numpy as np
import pytest
from lv_waves.exceptions import BelowMinimalSpeed, ValidationError
from lv_waves.params import (
    ModelParams,
    SpeedSpec,
    classify_speed,
    decay_branch,
    iteration_beta,
    minimal_speed,
    predicted_exponents,
    to_original,
    validate_hypotheses,
)

from .conftest import H3_FAILS, LARGE_BRANCH, SMALL_BRANCH


@pytest.mark.parametrize("params", [SMALL_BRANCH, LARGE_BRANCH])
def test_reference_parameters_pass_every_hypothesis(params):
    report = validate_hypotheses(params)
    assert report.all_pass
    assert report.as_dict()["all_pass"] is True


def test_h3_failure_is_reported():
    report = validate_hypotheses(H3_FAILS)
    assert report.h1 and report.h2
    assert not report.h3
    assert report.margins[2] < 0


@pytest.mark.parametrize(
    "a1,a2,r",
    [(0.0, 2.0, 0.5), (1.0, 2.0, 0.5), (0.5, 1.0, 0.5), (0.5, 2.0, 0.0), (-0.1, 2.0, 0.5)],
)
def test_h1_is_strict(a1, a2, r):
    assert not validate_hypotheses(ModelParams(a1, a2, r)).h1


def test_h2_boundary_passes():
    # r(a2 - 1) == 1 - a1 exactly
    report = validate_hypotheses(ModelParams(0.5, 2.0, 0.5))
    assert report.margins[1] == 0.0
    assert report.h2


@pytest.mark.parametrize("value", [math.nan, math.inf, -math.inf])
def test_non_finite_parameters_are_rejected(value):
    with pytest.raises(ValidationError):
        ModelParams(a1=value, a2=2.0, r=0.5)


def test_minimal_speed():
    assert minimal_speed(SMALL_BRANCH) == pytest.approx(math.sqrt(2.0), abs=1e-15)
    assert minimal_speed(LARGE_BRANCH) == pytest.approx(2.0 * math.sqrt(0.8))


def test_minimal_speed_requires_h1():
    with pytest.raises(ValidationError):
        minimal_speed(ModelParams(1.5, 2.0, 0.5))


def test_classify_speed():
    assert classify_speed(SMALL_BRANCH, 2.0).regime == "supercritical"
    assert classify_speed(SMALL_BRANCH, 1.0).regime == "subcritical"
    assert classify_speed(SMALL_BRANCH, math.sqrt(2.0)).regime == "critical"
    # inside the relative tolerance around c*
    assert classify_speed(SMALL_BRANCH, math.sqrt(2.0) + 1e-12).regime == "critical"


@pytest.mark.parametrize("c", [0.0, -1.0, math.nan])
def test_classify_rejects_bad_speed(c):
    with pytest.raises(ValidationError):
        classify_speed(SMALL_BRANCH, c)


def test_small_branch_exponents():
    exponents = predicted_exponents(SMALL_BRANCH, classify_speed(SMALL_BRANCH, 2.0))
    assert exponents.branch == "small"
    assert exponents.lambda_minus == pytest.approx((2.0 - math.sqrt(2.0)) / 2.0)
    assert exponents.mu_u_plus == pytest.approx((math.sqrt(6.0) - 2.0) / 2.0)
    assert exponents.mu_v_plus == exponents.mu_u_plus
    assert not exponents.critical_polynomial


def test_large_branch_exponents():
    exponents = predicted_exponents(LARGE_BRANCH, classify_speed(LARGE_BRANCH, 2.0))
    assert exponents.branch == "large"
    assert exponents.mu_u_plus == pytest.approx((math.sqrt(8.0) - 2.0) / 2.0)
    assert exponents.mu_v_plus == pytest.approx((math.sqrt(12.0) - 2.0) / 2.0)


def test_critical_exponents():
    exponents = predicted_exponents(SMALL_BRANCH, SpeedSpec(math.sqrt(2.0), "critical"))
    assert exponents.critical_polynomial
    assert exponents.lambda_minus == pytest.approx(math.sqrt(0.5))
    assert exponents.mu_v_plus == pytest.approx(1.0 - math.sqrt(0.5))


def test_exponents_below_minimal_speed():
    with pytest.raises(BelowMinimalSpeed):
        predicted_exponents(SMALL_BRANCH, classify_speed(SMALL_BRANCH, 1.0))


def test_exponents_need_hypotheses():
    with pytest.raises(ValidationError):
        predicted_exponents(H3_FAILS, SpeedSpec(2.0, "supercritical"))


def test_decay_branch_split():
    assert decay_branch(ModelParams(0.5, 3.0, 0.5)) == "small"
    assert decay_branch(ModelParams(0.5, 3.0, 0.75)) == "large"


def test_reaction_vanishes_at_equilibria():
    zero, one = np.zeros(1), np.ones(1)
    for state in ((zero, zero), (one, one)):
        f1, f2 = SMALL_BRANCH.reaction(*state)
        assert f1[0] == 0.0 and f2[0] == 0.0


def test_transformed_reaction_matches_original():
    rng = np.random.default_rng(7)
    u, v = rng.uniform(0, 1, 50), rng.uniform(0, 1, 50)
    f1, f2 = LARGE_BRANCH.reaction(u, v)
    fu, fv = LARGE_BRANCH.original_reaction(u, to_original(v))
    np.testing.assert_allclose(f1, fu, atol=1e-14)
    np.testing.assert_allclose(f2, -fv, atol=1e-14)


def test_system_is_cooperative_on_the_box():
    grid = np.linspace(0.0, 1.0, 21)
    u, v = np.meshgrid(grid, grid)
    _, a12, a21, _ = LARGE_BRANCH.jacobian(u, v)
    assert np.all(a12 >= 0) and np.all(a21 >= 0)


def test_iteration_beta_bounds_diagonal_partials():
    beta = iteration_beta(LARGE_BRANCH)
    grid = np.linspace(0.0, 1.0, 21)
    u, v = np.meshgrid(grid, grid)
    a11, _, _, a22 = LARGE_BRANCH.jacobian(u, v)
    assert np.all(a11 + beta >= 0) and np.all(a22 + beta >= 0)
