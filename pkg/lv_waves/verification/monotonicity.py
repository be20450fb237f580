"""Strict monotonicity certificate of a computed wave."""

from dataclasses import dataclass, field

import numpy as np

from lv_waves.numerics.grid import WaveProfile
from lv_waves.numerics.residual import apply_operator
from lv_waves.params import ModelParams
from lv_waves.type_defs import Component

SATURATION = 64.0 * np.finfo(np.float64).eps
MAX_REPORTED_NODES = 20


@dataclass
class MonotonicityReport:
    """
    Forward-difference check of both components.

    ``failing_nodes`` holds, per component, the first nodes ``i`` with
    ``w[i+1] - w[i] <= 0``. Differences between nodes saturated at the
    equilibrium are skipped and counted in ``saturated``.
    """

    min_difference: dict[str, float] = field(default_factory=dict)
    failing_nodes: dict[str, list[int]] = field(default_factory=dict)
    failing_count: dict[str, int] = field(default_factory=dict)
    certified: dict[str, int] = field(default_factory=dict)
    saturated: dict[str, int] = field(default_factory=dict)
    derivative_residual: tuple[float, float] | None = None

    @property
    def passed(self) -> bool:
        return all(
            self.failing_count[name] == 0 and self.certified[name] > 0
            for name in self.failing_count
        )

    def as_dict(self) -> dict[str, object]:
        return {
            "min_difference": self.min_difference,
            "failing_nodes": self.failing_nodes,
            "failing_count": self.failing_count,
            "certified": self.certified,
            "saturated": self.saturated,
            "derivative_residual": (
                None if self.derivative_residual is None else list(self.derivative_residual)
            ),
            "passed": self.passed,
        }


def derivative_residual(w: WaveProfile, p: ModelParams, c: float) -> tuple[float, float]:
    """
    Sup-norm residual of the linearized system satisfied by ``(u', v')``.

    The derivatives are taken numerically, so the residual is first order
    in h rather than zero.
    """
    grid = w.grid
    u, v = w.u.values, w.v.values
    w1 = np.gradient(u, grid.h)
    w2 = np.gradient(v, grid.h)
    a11, a12, a21, a22 = p.jacobian(u[1:-1], v[1:-1])
    r1 = apply_operator(grid, c, w1) + a11 * w1[1:-1] + a12 * w2[1:-1]
    r2 = apply_operator(grid, c, w2) + a21 * w1[1:-1] + a22 * w2[1:-1]
    # one-sided gradients at the ends pollute the first and last interior rows
    return float(np.max(np.abs(r1[1:-1]))), float(np.max(np.abs(r2[1:-1])))


def monotonicity_certificate(
    w: WaveProfile, p: ModelParams | None = None, c: float | None = None
) -> MonotonicityReport:
    """
    Check strict increase of u and v node to node.

    With ``p`` and ``c`` the derivative-system residual is reported as a
    consistency witness.
    """
    report = MonotonicityReport()
    names: tuple[Component, Component] = ("u", "v")
    for name in names:
        values = w.component(name)
        diffs = np.diff(values)
        saturated = (1.0 - values[:-1] <= SATURATION) & (1.0 - values[1:] <= SATURATION)
        checked = ~saturated
        failing = np.flatnonzero(checked & (diffs <= 0))
        report.min_difference[name] = float(diffs[checked].min()) if checked.any() else 0.0
        report.failing_nodes[name] = [int(i) for i in failing[:MAX_REPORTED_NODES]]
        report.failing_count[name] = int(failing.size)
        report.certified[name] = int(np.count_nonzero(checked & (diffs > 0)))
        report.saturated[name] = int(np.count_nonzero(saturated))
    if p is not None and c is not None:
        report.derivative_residual = derivative_residual(w, p, c)
    return report
