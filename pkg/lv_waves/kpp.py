"""Scalar KPP fronts ``w'' - c w' + f(w) = 0`` for logistic ``f``.

Two instances feed the upper/lower construction: ``d1 = 1 - a1, b = 1``
for the lower solution and ``d1 = 1 - a1, b = (1 - a1)/(1 - a1 - l)`` for
the upper one.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import BelowMinimalSpeed, ConvergenceError, ValidationError
from .numerics.grid import Grid, SampledFunction
from .numerics.newton import damped_newton, scalar_system
from .params import ModelParams, is_critical
from .type_defs import FloatArray

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KppSpec:
    """
    KPP nonlinearity with ``f'(0) = d1``, ``f'(b) = -d2``.

    Only the logistic family ``f(w) = d1 w (1 - w/b)`` can be solved, which
    has ``d2 = d1`` and quadratic coefficient ``kappa = d1 / b``; a
    different ``d2`` is accepted for rate formulas alone.
    """

    d1: float
    d2: float
    b: float

    def __post_init__(self) -> None:
        for name in ("d1", "d2", "b"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise ValidationError(f"KPP {name} must be positive, got {value}")

    @classmethod
    def logistic(cls, d1: float, b: float = 1.0) -> "KppSpec":
        return cls(d1=d1, d2=d1, b=b)

    @classmethod
    def lower(cls, p: ModelParams) -> "KppSpec":
        """Nonlinearity of the lower solution g."""
        return cls.logistic(p.alpha, 1.0)

    @classmethod
    def upper(cls, p: ModelParams, l: float) -> "KppSpec":  # noqa: E741
        """Nonlinearity of the upper solution, ceiling (1-a1)/(1-a1-l)."""
        if not 0 <= l < p.alpha:
            raise ValidationError(f"l must lie in [0, 1 - a1), got {l}")
        return cls.logistic(p.alpha, p.alpha / (p.alpha - l))

    @property
    def kappa(self) -> float:
        return self.d1 / self.b

    @property
    def is_logistic(self) -> bool:
        return self.d2 == self.d1

    @property
    def minimal_speed(self) -> float:
        return 2.0 * math.sqrt(self.d1)

    def f(self, w: FloatArray) -> FloatArray:
        return self.d1 * w * (1.0 - w / self.b)

    def df(self, w: FloatArray) -> FloatArray:
        return self.d1 * (1.0 - 2.0 * w / self.b)


@dataclass(frozen=True, eq=False)
class KppWave:
    """Monotone KPP front normalized so that ``w(0) = b/2``."""

    profile: SampledFunction
    c: float
    spec: KppSpec
    newton_steps: int = 0
    residual: float = 0.0


def _require_speed(spec: KppSpec, c: float) -> bool:
    """Return True at critical speed; raise below it."""
    c_min = spec.minimal_speed
    if is_critical(c, c_min):
        return True
    if c < c_min:
        raise BelowMinimalSpeed(f"below KPP minimal speed: c = {c} < {c_min}")
    return False


def kpp_predicted_rates(spec: KppSpec, c: float) -> tuple[float, bool, float]:
    """
    Tail rates of the KPP front.

    Returns:
        (rate at -inf, polynomial factor flag, rate at +inf).

    Raises:
        BelowMinimalSpeed: If c < 2 sqrt(d1).
    """
    if _require_speed(spec, c):
        root = math.sqrt(spec.d1)
        return root, True, math.sqrt(spec.d1 + spec.d2) - root
    return (
        (c - math.sqrt(c * c - 4.0 * spec.d1)) / 2.0,
        False,
        (math.sqrt(c * c + 4.0 * spec.d2) - c) / 2.0,
    )


def solve_kpp(
    spec: KppSpec,
    c: float,
    grid: Grid,
    tol: float = 1e-9,
    max_steps: int = 100,
    guess_shift: float = 0.0,
) -> KppWave:
    """
    Solve the KPP front by damped Newton from a logistic-sigmoid guess.

    The phase row ``w(0) = b/2`` replaces a condition at -L, so the wave
    comes out normalized and its left tail is not forced to zero.

    Args:
        spec: Logistic nonlinearity.
        c: Wave speed, at least 2 sqrt(d1).
        grid: Mesh; h < 2/c is enforced.
        tol: Residual sup-norm tolerance.
        max_steps: Newton step cap.
        guess_shift: Translation of the initial sigmoid.

    Raises:
        BelowMinimalSpeed: If c < 2 sqrt(d1).
        ValidationError: If the nonlinearity is not logistic.
        ConvergenceError: If Newton diverges or the result is not increasing.
    """
    if not spec.is_logistic:
        raise ValidationError("only the logistic KPP family can be solved")
    rate, _, _ = kpp_predicted_rates(spec, c)
    grid.check_speed(c)
    xi = grid.nodes
    guess = spec.b / (1.0 + np.exp(-rate * (xi - guess_shift)))
    residual, jacobian = scalar_system(grid, c, spec.f, spec.df, spec.b / 2.0, spec.b)
    result = damped_newton(residual, jacobian, guess, tol=tol, max_steps=max_steps)
    w = result.x
    if w[0] <= 0 or np.any(np.diff(w) <= 0):
        bad = int(np.flatnonzero(np.diff(w) <= 0)[0]) if np.any(np.diff(w) <= 0) else 0
        raise ConvergenceError(
            f"KPP profile is not positive and strictly increasing at node {bad}",
            trace=result.history,
        )
    logger.debug(
        "KPP front d1=%g b=%g c=%g converged in %d Newton steps (residual %.2e)",
        spec.d1,
        spec.b,
        c,
        result.steps,
        result.residual,
    )
    return KppWave(
        profile=SampledFunction(grid, w),
        c=c,
        spec=spec,
        newton_steps=result.steps,
        residual=result.residual,
    )
