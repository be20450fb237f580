"""Discrete residuals of the traveling-wave system."""

import numpy as np

from lv_waves.exceptions import GridError
from lv_waves.params import ModelParams
from lv_waves.type_defs import FloatArray

from .bvp import stencil
from .grid import Grid, WaveProfile


def apply_operator(grid: Grid, c: float, values: FloatArray) -> FloatArray:
    """Centred ``w'' - c w'`` at the interior nodes (length n - 2)."""
    lower, centre, upper = stencil(grid, c)
    return np.asarray(
        lower * values[:-2] + centre * values[1:-1] + upper * values[2:],
        dtype=np.float64,
    )


def residual_arrays(
    profile: WaveProfile, p: ModelParams, c: float
) -> tuple[FloatArray, FloatArray]:
    """
    Interior residuals ``u'' - c u' + F1`` and ``v'' - c v' + F2``.

    Entry ``i`` belongs to node ``i + 1``.
    """
    grid = profile.grid
    u = profile.u.values
    v = profile.v.values
    f1, f2 = p.reaction(u[1:-1], v[1:-1])
    return apply_operator(grid, c, u) + f1, apply_operator(grid, c, v) + f2


def discrete_residual(profile: WaveProfile, p: ModelParams, c: float) -> tuple[float, float]:
    """
    Sup-norms of the two discretized equation residuals at interior nodes.

    Raises:
        GridError: If the grid has fewer than 5 nodes.
    """
    if profile.grid.n < 5:
        raise GridError(f"residual needs at least 5 nodes, got {profile.grid.n}")
    r1, r2 = residual_arrays(profile, p, c)
    return float(np.max(np.abs(r1))), float(np.max(np.abs(r2)))
