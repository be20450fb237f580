"""Empirical tail exponents of computed waves.

At -infinity the fitted quantity is the component itself; at +infinity it
is the distance to the equilibrium, ``1 - component``. The log of the
quantity is fitted linearly in xi; a joint fit against ``[1, xi, log|xi|]``
detects the linear polynomial factor that appears at critical speed.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .exceptions import FitWindowError
from .numerics.grid import Grid, WaveProfile
from .params import ModelParams, classify_speed, predicted_exponents
from .type_defs import Component, DecayFitDict, End, FloatArray, RateComparisonDict

logger = logging.getLogger(__name__)

WINDOW_WIDTH = 20.0
WINDOW_MARGIN = 5.0
INNER_EDGE = 5.0
QUANTITY_FLOOR = 1e-300
MIN_FIT_NODES = 10
POLYNOMIAL_BAND = (0.7, 1.3)


@dataclass(frozen=True)
class DecayFit:
    """
    Exponential tail fit ``q ~ amplitude * exp(-rate |xi|)``.

    When ``polynomial_detected`` is set the rate and amplitude come from the
    joint fit ``log q = log A + slope xi + log_coefficient log|xi|``.
    """

    end: End
    component: Component
    rate: float
    polynomial_detected: bool
    window: tuple[float, float]
    fit_residual: float
    amplitude: float
    log_coefficient: float

    def as_dict(self) -> DecayFitDict:
        return {
            "end": self.end,
            "component": self.component,
            "rate": self.rate,
            "polynomial_detected": self.polynomial_detected,
            "window": list(self.window),
            "fit_residual": self.fit_residual,
            "amplitude": self.amplitude,
            "log_coefficient": self.log_coefficient,
        }


@dataclass(frozen=True)
class RateComparison:
    """A fitted rate checked against its closed-form prediction."""

    end: End
    component: Component
    predicted: float
    fitted: float
    tol: float
    polynomial_detected: bool = False

    @property
    def relative_error(self) -> float:
        return abs(self.fitted - self.predicted) / self.predicted

    @property
    def passed(self) -> bool:
        return self.relative_error <= self.tol

    def as_dict(self) -> RateComparisonDict:
        return {
            "end": self.end,
            "component": self.component,
            "predicted": self.predicted,
            "fitted": self.fitted,
            "relative_error": self.relative_error,
            "passed": self.passed,
            "polynomial_detected": self.polynomial_detected,
        }


def tail_quantity(profile: WaveProfile, end: End, component: Component) -> FloatArray:
    values = profile.component(component)
    return values if end == "minus_inf" else 1.0 - values


def _window_mask(grid: Grid, window: tuple[float, float]) -> np.ndarray:
    lo, hi = min(window), max(window)
    return (grid.nodes >= lo - 1e-12) & (grid.nodes <= hi + 1e-12)


def default_window(
    grid: Grid, end: End, quantity: FloatArray | None = None, floor: float = QUANTITY_FLOOR
) -> tuple[float, float]:
    """
    Fit window ``[-L+5, -L+25]`` or ``[L-25, L-5]``.

    Given the fitted quantity, the window slides inward (width kept, inner
    edge at least 5 from the origin) while part of it falls under ``floor``,
    and then shrinks from the outer edge.
    """
    step = max(grid.h, 0.5)
    outer = grid.L - WINDOW_MARGIN
    inner = max(outer - WINDOW_WIDTH, INNER_EDGE)
    sign = -1.0 if end == "minus_inf" else 1.0

    def window() -> tuple[float, float]:
        a, b = sign * outer, sign * inner
        return (a, b) if a < b else (b, a)

    def under_floor() -> bool:
        if quantity is None:
            return False
        mask = _window_mask(grid, window())
        return bool(mask.any() and quantity[mask].min() < floor)

    start = window()
    while under_floor() and inner - step >= INNER_EDGE:
        outer -= step
        inner -= step
    while under_floor() and outer - step > inner:
        outer -= step
    if window() != start:
        logger.warning("Fit window at %s moved from %s to %s", end, start, window())
    return window()


def fit_decay(
    profile: WaveProfile,
    end: End,
    component: Component,
    window: tuple[float, float] | None = None,
) -> DecayFit:
    """
    Fit the exponential decay rate of one tail of one component.

    Args:
        profile: Wave profile.
        end: Tail to fit.
        component: Component to fit.
        window: Fit interval in xi; the default window is chosen when omitted.

    Raises:
        FitWindowError: If the window has fewer than 10 nodes or the
            quantity is not positive on it.
    """
    grid = profile.grid
    quantity = tail_quantity(profile, end, component)
    if window is None:
        window = default_window(grid, end, quantity)
    mask = _window_mask(grid, window)
    if np.count_nonzero(mask) < MIN_FIT_NODES:
        raise FitWindowError(
            f"fit window {window} holds {np.count_nonzero(mask)} nodes, need {MIN_FIT_NODES}"
        )
    xi = grid.nodes[mask]
    q = quantity[mask]
    if np.any(q <= 0):
        raise FitWindowError(f"window too close to equilibrium/floor: {window}")
    log_q = np.log(q)

    slope, intercept = np.polyfit(xi, log_q, 1)
    fitted = slope * xi + intercept
    rate, amplitude = abs(float(slope)), float(np.exp(intercept))
    fit_residual = float(np.sqrt(np.mean((log_q - fitted) ** 2)))

    log_coefficient = float("nan")
    polynomial = False
    if np.all(np.abs(xi) >= 1.0):
        design = np.column_stack([np.ones_like(xi), xi, np.log(np.abs(xi))])
        coef, *_ = np.linalg.lstsq(design, log_q, rcond=None)
        log_coefficient = float(coef[2])
        polynomial = POLYNOMIAL_BAND[0] <= log_coefficient <= POLYNOMIAL_BAND[1]
        if polynomial:
            rate, amplitude = abs(float(coef[1])), float(np.exp(coef[0]))
            fit_residual = float(np.sqrt(np.mean((log_q - design @ coef) ** 2)))

    return DecayFit(
        end=end,
        component=component,
        rate=rate,
        polynomial_detected=polynomial,
        window=(float(min(window)), float(max(window))),
        fit_residual=fit_residual,
        amplitude=amplitude,
        log_coefficient=log_coefficient,
    )


def compare_rates(
    profile: WaveProfile, p: ModelParams, c: float, tol: float
) -> list[RateComparison]:
    """
    Compare fitted and predicted rates for every (end, component) pair.

    At +infinity in the large branch u is compared against the slower rate
    ``(sqrt(c^2 + 4) - c)/2`` and v against ``(sqrt(c^2 + 4 r (a2-1)) - c)/2``.

    Raises:
        ValidationError: If H1-H3 fail.
        BelowMinimalSpeed: If c is subcritical.
        FitWindowError: If a fit window is unusable.
    """
    exponents = predicted_exponents(p, classify_speed(p, c))
    predicted: dict[tuple[End, Component], float] = {
        ("minus_inf", "u"): exponents.lambda_minus,
        ("minus_inf", "v"): exponents.lambda_minus,
        ("plus_inf", "u"): exponents.mu_u_plus,
        ("plus_inf", "v"): exponents.mu_v_plus,
    }
    comparisons = []
    for (end, component), rate in predicted.items():
        fit = fit_decay(profile, end, component)
        comparisons.append(
            RateComparison(
                end=end,
                component=component,
                predicted=rate,
                fitted=fit.rate,
                tol=tol,
                polynomial_detected=fit.polynomial_detected,
            )
        )
        logger.debug(
            "Rate %s/%s: fitted %.6f, predicted %.6f", end, component, fit.rate, rate
        )
    return comparisons
