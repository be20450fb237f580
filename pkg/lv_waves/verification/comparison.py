"""Sliding-domain comparison and uniqueness up to translation."""

import logging
from dataclasses import dataclass, field

import numpy as np

from lv_waves.exceptions import CrossingNotFound, GridError, OrderingError, ValidationError
from lv_waves.numerics.grid import WaveProfile
from lv_waves.params import ModelParams
from lv_waves.type_defs import Component
from lv_waves.utils import level_crossing, shift_values

logger = logging.getLogger(__name__)

SLIDING_SLACK = 1e-12
COMPONENTS: tuple[Component, Component] = ("u", "v")


@dataclass
class ComparisonReport:
    """
    Replay of the sliding argument on [-N, N].

    ``mu_path`` lists the shifts examined, from 2N down to the last one
    checked; ``touch`` describes the first violation, if any.
    """

    N: float
    mu_path: list[float] = field(default_factory=list)
    touch: dict[str, float | int | str] | None = None

    @property
    def ordered(self) -> bool:
        return self.touch is None

    @property
    def verdict(self) -> str:
        return "ordered" if self.ordered else "violated"

    def as_dict(self) -> dict[str, object]:
        return {
            "interval": [-self.N, self.N],
            "mu_examined": len(self.mu_path),
            "mu_first": self.mu_path[0] if self.mu_path else None,
            "mu_last": self.mu_path[-1] if self.mu_path else None,
            "touch": self.touch,
            "verdict": self.verdict,
        }


def sliding_comparison(
    upper: WaveProfile,
    lower: WaveProfile,
    p: ModelParams,
    c: float,
    N: float,
    slack: float = SLIDING_SLACK,
) -> ComparisonReport:
    """
    Slide ``upper`` from a shift of 2N down to 0 and check that it keeps
    dominating ``lower``.

    At each shift ``mu = k h`` the check is ``lower(xi) <= upper(xi + mu)``
    for xi in [-N, N - mu]. The end conditions ``lower(-N) < upper(xi)`` for
    xi in (-N, N] and ``lower(xi) < upper(N)`` for xi in [-N, N) must hold
    first.

    Raises:
        GridError: If the profiles live on different grids or N > L.
        OrderingError: If an end condition fails.
    """
    grid = upper.grid
    if lower.grid != grid:
        raise GridError("profiles live on different grids")
    if not 0 < N <= grid.L + 1e-12:
        raise GridError(f"comparison half-width N = {N} must lie in (0, {grid.L}]")
    i0, i1 = grid.index_of(-N), grid.index_of(N)
    for name in COMPONENTS:
        up = upper.component(name)[i0 : i1 + 1]
        low = lower.component(name)[i0 : i1 + 1]
        if np.any(low[0] >= up[1:] + slack):
            raise OrderingError(f"end condition at -N fails for {name}")
        if np.any(low[:-1] >= up[-1] + slack):
            raise OrderingError(f"end condition at N fails for {name}")

    report = ComparisonReport(N=N)
    span = i1 - i0
    for k in range(span, -1, -1):
        mu = k * grid.h
        report.mu_path.append(mu)
        for name in COMPONENTS:
            low = lower.component(name)[i0 : i1 - k + 1]
            up = upper.component(name)[i0 + k : i1 + 1]
            bad = np.flatnonzero(low > up + slack)
            if bad.size:
                node = int(i0 + bad[0])
                report.touch = {
                    "component": name,
                    "node": node,
                    "xi": float(grid.nodes[node]),
                    "mu": mu,
                }
                logger.info(
                    "Sliding comparison at c=%g touched at mu=%g, %s node %d", c, mu, name, node
                )
                return report
    return report


@dataclass(frozen=True)
class UniquenessReport:
    """Distance between two waves after aligning their half-level crossings."""

    theta: float
    distance: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.distance < self.tol

    def as_dict(self) -> dict[str, float | bool]:
        return {
            "theta": self.theta,
            "distance": self.distance,
            "tol": self.tol,
            "passed": self.passed,
        }


def uniqueness_check(w1: WaveProfile, w2: WaveProfile, tol: float = 1e-4) -> UniquenessReport:
    """
    Align ``w1`` to ``w2`` and measure their sup distance.

    ``theta`` is the offset between the u = 1/2 crossings; ``w1`` moved
    right by ``theta`` is compared with ``w2`` over both components.

    Raises:
        GridError: If the profiles live on different grids.
        CrossingNotFound: If a profile never crosses u = 1/2.
    """
    if w1.grid != w2.grid:
        raise GridError("profiles live on different grids")
    if not tol > 0:
        raise ValidationError(f"tolerance must be positive, got {tol}")
    nodes = w1.grid.nodes
    crossings = [level_crossing(nodes, w.u.values, 0.5) for w in (w1, w2)]
    if crossings[0] is None or crossings[1] is None:
        raise CrossingNotFound("half-level crossing missing")
    theta = crossings[1] - crossings[0]
    distance = max(
        float(np.max(np.abs(shift_values(nodes, w1.component(name), -theta) - w2.component(name))))
        for name in COMPONENTS
    )
    return UniquenessReport(theta=theta, distance=distance, tol=tol)
