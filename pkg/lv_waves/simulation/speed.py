"""Spreading speed estimates and the rigid-translation test."""

import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.optimize

from lv_waves.exceptions import DomainTooShort, ValidationError
from lv_waves.numerics.grid import WaveProfile
from lv_waves.params import ModelParams

from .core import SimConfig, SimTrace, simulate

logger = logging.getLogger(__name__)

MIN_SAMPLES = 10
BAND_Z = 1.96


@dataclass(frozen=True)
class SpeedEstimate:
    """Slope of the front trajectory with its standard error."""

    speed: float
    stderr: float
    samples: int
    burn_in_fraction: float

    @property
    def band(self) -> tuple[float, float]:
        return self.speed - BAND_Z * self.stderr, self.speed + BAND_Z * self.stderr

    def as_dict(self) -> dict[str, float | int | list[float]]:
        return {
            "speed": self.speed,
            "stderr": self.stderr,
            "band": list(self.band),
            "samples": self.samples,
            "burn_in_fraction": self.burn_in_fraction,
        }


def estimate_speed(
    trace: SimTrace, burn_in_fraction: float = 0.5, edge: float | None = None
) -> SpeedEstimate:
    """
    Least-squares slope of x_front against t after discarding the first
    ``burn_in_fraction`` of the samples.

    Args:
        trace: Simulation trace.
        burn_in_fraction: Fraction of samples dropped from the start.
        edge: Distance from either domain end at which the front counts as
            having reached the boundary; defaults to two grid steps.

    Raises:
        ValidationError: If fewer than 10 samples remain.
        DomainTooShort: If the front is lost or reaches the domain edge.
    """
    if not 0 <= burn_in_fraction < 1:
        raise ValidationError(f"burn-in fraction must lie in [0, 1), got {burn_in_fraction}")
    start = int(math.ceil(burn_in_fraction * trace.times.size))
    t = trace.times[start:]
    x = trace.fronts[start:]
    if t.size < MIN_SAMPLES:
        raise ValidationError(
            f"speed estimate needs {MIN_SAMPLES} samples after burn-in, got {t.size}"
        )
    dx = trace.x[1] - trace.x[0]
    margin = 2.0 * dx if edge is None else edge
    if np.any(np.isnan(x)) or np.any(x <= trace.x[0] + margin) or np.any(x >= trace.x[-1] - margin):
        raise DomainTooShort("domain too short: the front reached the boundary before T")
    coef, cov = np.polyfit(t, x, 1, cov=True)
    estimate = SpeedEstimate(
        speed=float(coef[0]),
        stderr=float(np.sqrt(max(cov[0, 0], 0.0))),
        samples=int(t.size),
        burn_in_fraction=burn_in_fraction,
    )
    trace.speed = estimate
    return estimate


@dataclass(frozen=True)
class TranslationReport:
    """Outcome of running the PDE from a computed wave."""

    c: float
    claimed_speed: float
    T: float
    realized_speed: float | None
    shape_error: float
    best_shift: float
    speed_tol: float = 0.02
    shape_tol: float = 1e-2

    @property
    def speed_error(self) -> float | None:
        if self.realized_speed is None:
            return None
        return abs(self.realized_speed - self.claimed_speed) / self.claimed_speed

    @property
    def passed(self) -> bool:
        speed_ok = self.speed_error is None or self.speed_error <= self.speed_tol
        return speed_ok and self.shape_error < self.shape_tol

    def as_dict(self) -> dict[str, float | bool | None]:
        return {
            "c": self.c,
            "claimed_speed": self.claimed_speed,
            "T": self.T,
            "realized_speed": self.realized_speed,
            "speed_error": self.speed_error,
            "shape_error": self.shape_error,
            "best_shift": self.best_shift,
            "passed": self.passed,
        }


def wave_translation_test(
    p: ModelParams,
    c: float,
    wave: WaveProfile,
    T: float = 20.0,
    X: float = 200.0,
    dx: float = 0.05,
    dt: float = 0.01,
    claimed_speed: float | None = None,
) -> TranslationReport:
    """
    Start the PDE from ``wave`` and check that it translates rigidly.

    The wave is placed at ``x0 = X/2 + cT/2`` so that it ends near
    ``X/2 - cT/2``. The realized speed is ``(front(0) - front(T))/T``; the
    shape error is the sup distance between u(., T) and the best translate
    of the wave's u. ``claimed_speed`` (default ``c``) is what the realized
    speed is checked against.

    Raises:
        ValidationError: If H1 fails or the run settings are invalid.
        SimulationBlowUp: If the fields stop being finite.
    """
    claimed = c if claimed_speed is None else claimed_speed
    if T == 0:
        return TranslationReport(
            c=c, claimed_speed=claimed, T=T, realized_speed=None, shape_error=0.0, best_shift=0.0
        )
    x0 = X / 2.0 + c * T / 2.0
    cfg = SimConfig(X=X, dx=dx, dt=dt, T=T, init="wave", wave=wave, x0=x0)
    trace = simulate(p, cfg)
    start, end = trace.fronts[0], trace.fronts[-1]
    realized = None if np.isnan(start) or np.isnan(end) else float((start - end) / T)
    nodes = wave.grid.nodes
    u_final = trace.u

    def shape_error(shift: float) -> float:
        shifted = np.interp(trace.x - x0 + shift, nodes, wave.u.values, left=0.0, right=1.0)
        return float(np.max(np.abs(u_final - shifted)))

    guess = c * T if realized is None else realized * T
    result = scipy.optimize.minimize_scalar(
        shape_error,
        bounds=(guess - 5.0, guess + 5.0),
        method="bounded",
        options={"xatol": 1e-8},
    )
    report = TranslationReport(
        c=c,
        claimed_speed=claimed,
        T=T,
        realized_speed=realized,
        shape_error=float(result.fun),
        best_shift=float(result.x),
    )
    logger.info(
        "Translation test at c=%g: realized speed %s, shape error %.3e",
        c,
        realized,
        report.shape_error,
    )
    return report
