"""Uniform grids and sampled profiles on a truncated line."""

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from lv_waves.exceptions import GridError, ValidationError
from lv_waves.type_defs import Component, FloatArray

BOX_SLACK = 1e-9


@dataclass(frozen=True)
class Grid:
    """
    Uniform mesh on [-L, L] with ``n`` nodes.

    ``n`` is odd so that xi = 0 is the centre node ``mid``.
    """

    L: float
    n: int

    def __post_init__(self) -> None:
        if not math.isfinite(self.L) or self.L <= 0:
            raise GridError(f"half-width L must be positive, got {self.L}")
        if self.n < 3:
            raise GridError(f"grid needs at least 3 nodes, got {self.n}")
        if self.n % 2 == 0:
            raise GridError(f"grid node count must be odd, got {self.n}")

    @classmethod
    def from_spacing(cls, L: float, h: float, c: float | None = None) -> "Grid":
        """
        Build the grid with spacing ``h``; 2L must be an even multiple of h.

        When a wave speed is given the grid also enforces h < 2/c.
        """
        if not math.isfinite(h) or h <= 0:
            raise GridError(f"spacing h must be positive, got {h}")
        intervals = round(2.0 * L / h)
        if intervals < 2 or abs(intervals * h - 2.0 * L) > 1e-9 * max(1.0, L):
            raise GridError(f"2L = {2.0 * L} is not a whole multiple of h = {h}")
        grid = cls(L=L, n=intervals + 1)
        if c is not None:
            grid.check_speed(c)
        return grid

    @property
    def h(self) -> float:
        return 2.0 * self.L / (self.n - 1)

    @property
    def mid(self) -> int:
        return (self.n - 1) // 2

    @cached_property
    def nodes(self) -> FloatArray:
        nodes = np.linspace(-self.L, self.L, self.n)
        nodes[self.mid] = 0.0
        return nodes

    def check_speed(self, c: float) -> None:
        """Enforce the diagonal-dominance bound h < 2/c."""
        if c > 0 and self.h >= 2.0 / c:
            raise GridError(
                f"spacing h = {self.h} breaks the discrete maximum principle "
                f"for c = {c} (need h < {2.0 / c})"
            )

    def index_of(self, xi: float) -> int:
        """Index of the node nearest to ``xi``."""
        return int(np.clip(round((xi + self.L) / self.h), 0, self.n - 1))

    def refined(self) -> "Grid":
        """Grid with half the spacing over the same interval."""
        return Grid(L=self.L, n=2 * self.n - 1)


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Values of a function at every node of a grid."""

    grid: Grid
    values: FloatArray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != (self.grid.n,):
            raise GridError(
                f"sampled function has {values.shape} values for a grid of {self.grid.n} nodes"
            )
        if not np.all(np.isfinite(values)):
            raise ValidationError("sampled function has non-finite values")
        object.__setattr__(self, "values", values)

    def at(self, xi: float | FloatArray) -> FloatArray:
        """Linear interpolation, extended by the boundary values."""
        return np.asarray(np.interp(xi, self.grid.nodes, self.values), dtype=np.float64)


@dataclass(frozen=True, eq=False)
class WaveProfile:
    """
    Sampled pair (u, v) of the transformed system.

    Both components lie in the box [0, 1] up to ``BOX_SLACK``.
    """

    u: SampledFunction
    v: SampledFunction
    meta: dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.u.grid != self.v.grid:
            raise GridError("profile components live on different grids")
        for name in ("u", "v"):
            values = getattr(self, name).values
            if values.min() < -BOX_SLACK or values.max() > 1.0 + BOX_SLACK:
                raise ValidationError(
                    f"profile component {name} leaves the box [0, 1]: "
                    f"[{values.min()}, {values.max()}]"
                )

    @classmethod
    def from_arrays(
        cls, grid: Grid, u: FloatArray, v: FloatArray, **meta: float
    ) -> "WaveProfile":
        return cls(SampledFunction(grid, u), SampledFunction(grid, v), dict(meta))

    @classmethod
    def constant(cls, grid: Grid, u: float, v: float) -> "WaveProfile":
        return cls.from_arrays(grid, np.full(grid.n, u), np.full(grid.n, v))

    @property
    def grid(self) -> Grid:
        return self.u.grid

    def component(self, name: Component) -> FloatArray:
        return self.u.values if name == "u" else self.v.values

    def stacked(self) -> FloatArray:
        """Unknown vector [u; v] used by the coupled Newton solver."""
        return np.concatenate([self.u.values, self.v.values])
