"""Explicit upper/lower solutions of the transformed wave system.

The lower solution is (g, g) where g is the KPP front with ``d1 = 1 - a1``,
``b = 1``. The upper solution is ``(min(hb, 1), min((1 + l) hb, 1))`` where
hb is the KPP front with ceiling ``(1 - a1)/(1 - a1 - l)``, translated to
the left until it dominates the lower one.
"""

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from lv_waves.exceptions import HypothesisError, OrderingError, ValidationError
from lv_waves.kpp import KppSpec, KppWave, solve_kpp
from lv_waves.numerics.grid import Grid, WaveProfile
from lv_waves.numerics.residual import residual_arrays
from lv_waves.params import ModelParams, minimal_speed, validate_hypotheses
from lv_waves.type_defs import Component, FloatArray
from lv_waves.utils import shift_nodes, shift_values

logger = logging.getLogger(__name__)

ORDERING_SLACK = 1e-12
NU_STEP = 0.5


@dataclass(frozen=True)
class UpperLowerConfig:
    """
    Construction constants.

    ``nu`` is the lattice shift of the upper solution; None means search for
    the smallest one. ``nu_applied`` is the shift actually used, a whole
    number of grid steps no smaller than ``nu``.
    """

    l: float  # noqa: E741
    nu: float | None = None
    nu_applied: float | None = None

    def validate(self, p: ModelParams) -> None:
        lower, upper = l_interval(p)
        if not (lower <= self.l < upper):
            raise ValidationError(f"l = {self.l} is outside [{lower}, {upper})")
        if self.nu is not None and self.nu < 0:
            raise ValidationError(f"shift nu must be nonnegative, got {self.nu}")


@dataclass(frozen=True, eq=False)
class OrderedPair:
    """Upper and lower solutions with lower <= upper at every node."""

    upper: WaveProfile
    lower: WaveProfile
    config: UpperLowerConfig | None = None
    kpp_waves: dict[str, KppWave] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.upper.grid != self.lower.grid:
            raise OrderingError("upper and lower solutions live on different grids")
        for name in ("u", "v"):
            gap = self.lower.component(name) - self.upper.component(name)
            if gap.max() > ORDERING_SLACK:
                node = int(np.argmax(gap))
                raise OrderingError(
                    f"lower exceeds upper in {name} at node {node} by {gap.max():.3e}"
                )

    @property
    def grid(self) -> Grid:
        return self.upper.grid


@dataclass
class UpperLowerReport:
    """Pointwise check of the upper/lower differential inequalities."""

    slack: float
    upper_worst: tuple[float, float]
    lower_worst: tuple[float, float]
    corner_nodes: dict[str, int | None]
    corner_jumps: dict[str, float]
    violations: list[str] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.violations


def l_interval(p: ModelParams) -> tuple[float, float]:
    """Admissible range [max(0, lower bound), 1 - a1) of l."""
    lower = (p.coupling - p.alpha) / (p.alpha + p.r)
    return max(0.0, lower), p.alpha


def choose_l(p: ModelParams) -> float:
    """
    Midpoint of the admissible l interval.

    Raises:
        HypothesisError: If H1-H3 fail or the interval is empty.
    """
    report = validate_hypotheses(p)
    if not report.all_pass:
        raise HypothesisError(f"hypotheses H1-H3 do not hold: {report.as_dict()}")
    lower, upper = l_interval(p)
    if lower >= upper:
        raise HypothesisError(f"empty l interval [{lower}, {upper})")
    return (lower + upper) / 2.0


def find_shift_nu(
    upper: WaveProfile, lower: WaveProfile, step: float = NU_STEP, slack: float = ORDERING_SLACK
) -> float:
    """
    Smallest nu in {0, step, 2 step, ...} such that ``upper(xi + nu)``
    dominates ``lower(xi)`` at every node.

    The translate is sampled by linear interpolation and extended by the
    boundary values of ``upper``.

    Raises:
        OrderingError: If no nu <= 2L works.
    """
    grid = upper.grid
    nodes = grid.nodes
    trials = int(math.floor(2.0 * grid.L / step + 1e-9))
    for k in range(trials + 1):
        nu = k * step
        dominated = all(
            np.all(lower.component(name) <= shift_values(nodes, upper.component(name), nu) + slack)
            for name in ("u", "v")
        )
        if dominated:
            return nu
    raise OrderingError("pair cannot be ordered")


def upper_from_front(front: FloatArray, l: float) -> tuple[FloatArray, FloatArray]:  # noqa: E741
    """Clamp the upper KPP front into the upper solution pair."""
    return np.minimum(front, 1.0), np.minimum((1.0 + l) * front, 1.0)


def build_pair(p: ModelParams, c: float, grid: Grid, cfg: UpperLowerConfig) -> OrderedPair:
    """
    Construct the ordered upper/lower pair at speed ``c``.

    The upper solution is shifted by whole grid steps so that it stays an
    exact discrete super-solution; the applied shift is the lattice nu
    rounded up to the grid.

    Raises:
        BelowMinimalSpeed: If c < c* (from the KPP solver).
        OrderingError: If a given nu does not order the pair.
    """
    cfg.validate(p)
    c_star = minimal_speed(p)
    lower_wave = solve_kpp(KppSpec.lower(p), c, grid)
    upper_wave = solve_kpp(KppSpec.upper(p, cfg.l), c, grid)
    g = lower_wave.profile.values
    lower = WaveProfile.from_arrays(grid, g, g.copy())
    raw_u, raw_v = upper_from_front(upper_wave.profile.values, cfg.l)
    raw_upper = WaveProfile.from_arrays(grid, raw_u, raw_v)

    nu = cfg.nu if cfg.nu is not None else find_shift_nu(raw_upper, lower)
    k = int(math.ceil(nu / grid.h - 1e-9))
    upper = WaveProfile.from_arrays(grid, shift_nodes(raw_u, k), shift_nodes(raw_v, k))
    logger.info(
        "Built upper/lower pair at c=%g (c*=%g): l=%g, nu=%g applied as %d nodes",
        c,
        c_star,
        cfg.l,
        nu,
        k,
    )
    return OrderedPair(
        upper=upper,
        lower=lower,
        config=replace(cfg, nu=nu, nu_applied=k * grid.h),
        kpp_waves={"lower": lower_wave, "upper": upper_wave},
    )


def clamp_corner(values: FloatArray) -> int | None:
    """First node where a clamped profile reaches 1, if it is interior."""
    hits = np.flatnonzero(values >= 1.0)
    if hits.size == 0 or hits[0] <= 1 or hits[0] >= values.size - 2:
        return None
    return int(hits[0])


def check_upper_lower_inequalities(
    pair: OrderedPair, p: ModelParams, c: float, slack: float | None = None
) -> UpperLowerReport:
    """
    Verify the upper/lower differential inequalities pointwise.

    Upper residuals must be <= slack and lower residuals >= -slack at every
    interior node, except the two nodes straddling each clamp corner of the
    upper profile. At a corner the one-sided derivatives must satisfy
    ``w'(y - 0) >= w'(y + 0)``.
    """
    grid = pair.grid
    h = grid.h
    slack = 10.0 * h**2 if slack is None else slack
    report = UpperLowerReport(
        slack=slack, upper_worst=(0.0, 0.0), lower_worst=(0.0, 0.0), corner_nodes={}, corner_jumps={}
    )
    excluded = np.zeros(grid.n - 2, dtype=bool)
    names: tuple[Component, Component] = ("u", "v")
    for name in names:
        corner = clamp_corner(pair.upper.component(name))
        report.corner_nodes[name] = corner
        if corner is None:
            continue
        # interior entry i belongs to node i + 1
        excluded[corner - 2 : corner] = True
        values = pair.upper.component(name)
        left = (values[corner - 1] - values[corner - 2]) / h
        right = (values[corner + 1] - values[corner]) / h
        report.corner_jumps[name] = left - right
        if left < right - slack:
            report.violations.append(f"upper {name} corner at node {corner}: {left:.3e} < {right:.3e}")

    upper_res = residual_arrays(pair.upper, p, c)
    lower_res = residual_arrays(pair.lower, p, c)
    upper_worst = tuple(float(np.max(np.where(excluded, -np.inf, r))) for r in upper_res)
    lower_worst = tuple(float(np.min(r)) for r in lower_res)
    report.upper_worst = (upper_worst[0], upper_worst[1])
    report.lower_worst = (lower_worst[0], lower_worst[1])
    for name, worst in zip(names, report.upper_worst, strict=True):
        if worst > slack:
            report.violations.append(f"upper {name} residual {worst:.3e} > {slack:.3e}")
    for name, worst in zip(names, report.lower_worst, strict=True):
        if worst < -slack:
            report.violations.append(f"lower {name} residual {worst:.3e} < {-slack:.3e}")
    return report
