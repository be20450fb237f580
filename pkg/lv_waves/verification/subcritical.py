"""Evidence that no monotone wave exists below the minimal speed.

The linearization of the u equation at the zero state has characteristic
roots ``(c +- sqrt(c^2 - 4(1 - a1)))/2``; below c* they are complex and
any front leaving zero oscillates. A Newton attempt on the wave problem is
run as corroboration.
"""

import cmath
import logging
import math
from dataclasses import dataclass

import numpy as np

from lv_waves.exceptions import ConvergenceError, NotSubcritical, ValidationError
from lv_waves.numerics.grid import Grid
from lv_waves.numerics.newton import coupled_system, damped_newton
from lv_waves.params import ModelParams, is_critical, minimal_speed
from lv_waves.utils import sign_changes

logger = logging.getLogger(__name__)

BOX_TOL = 1e-12


@dataclass(frozen=True)
class SubcriticalDiagnostic:
    """Characteristic roots at zero plus the outcome of a wave solve attempt."""

    c: float
    c_star: float
    discriminant: float
    roots: tuple[complex, complex]
    sign_changes: int
    newton_failed: bool
    box_violated: bool

    @property
    def oscillatory(self) -> bool:
        return self.discriminant < 0

    @property
    def evidence(self) -> bool:
        return self.sign_changes >= 2 or self.newton_failed or self.box_violated

    def as_dict(self) -> dict[str, object]:
        return {
            "c": self.c,
            "c_star": self.c_star,
            "discriminant": self.discriminant,
            "roots": [[z.real, z.imag] for z in self.roots],
            "sign_changes": self.sign_changes,
            "newton_failed": self.newton_failed,
            "box_violated": self.box_violated,
            "evidence": self.evidence,
        }


def characteristic_roots(p: ModelParams, c: float) -> tuple[float, tuple[complex, complex]]:
    """Discriminant ``c^2 - 4(1 - a1)`` and the two roots at the zero state."""
    disc = c * c - 4.0 * p.alpha
    root = cmath.sqrt(disc)
    return disc, ((c + root) / 2.0, (c - root) / 2.0)


def subcritical_diagnostic(
    p: ModelParams, c: float, grid: Grid | None = None, max_steps: int = 50
) -> SubcriticalDiagnostic:
    """
    Build the nonexistence diagnostic at a subcritical speed.

    Args:
        p: Model parameters satisfying H1.
        c: Speed with 0 < c < c*.
        grid: Mesh for the Newton attempt; [-60, 60] with h = 0.02 by default.
        max_steps: Newton step cap.

    Raises:
        NotSubcritical: If c >= c*.
    """
    if not math.isfinite(c) or c <= 0:
        raise ValidationError(f"wave speed must be a positive finite real, got {c!r}")
    c_star = minimal_speed(p)
    if c >= c_star or is_critical(c, c_star):
        raise NotSubcritical(f"not subcritical: c = {c} >= c* = {c_star}")
    disc, roots = characteristic_roots(p, c)

    grid = grid or Grid.from_spacing(60.0, 0.02, c)
    guess = 1.0 / (1.0 + np.exp(-(c / 2.0) * grid.nodes))
    residual, jacobian = coupled_system(grid, p, c)
    newton_failed = False
    changes = 0
    box_violated = False
    try:
        result = damped_newton(residual, jacobian, np.concatenate([guess, guess]), max_steps=max_steps)
    except ConvergenceError as exc:
        newton_failed = True
        logger.info("Newton attempt at subcritical c=%g failed: %s", c, exc)
    else:
        u, v = result.x[: grid.n], result.x[grid.n :]
        changes = sign_changes(u)
        box_violated = bool(
            u.min() < -BOX_TOL or v.min() < -BOX_TOL or v.max() > 1.0 + BOX_TOL
        )
    return SubcriticalDiagnostic(
        c=c,
        c_star=c_star,
        discriminant=disc,
        roots=roots,
        sign_changes=changes,
        newton_failed=newton_failed,
        box_violated=box_violated,
    )
