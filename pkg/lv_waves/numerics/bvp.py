"""Linear two-point boundary value problems on a uniform grid.

Discretizes ``w'' - c w' - beta w = rhs`` with centred second and first
differences and Dirichlet data at both ends, and solves the tridiagonal
system with LAPACK's banded solver.
"""

import numpy as np
import scipy.linalg

from lv_waves.exceptions import GridError, ValidationError
from lv_waves.type_defs import FloatArray

from .grid import Grid, SampledFunction


def stencil(grid: Grid, c: float) -> tuple[float, float, float]:
    """
    Coefficients (lower, centre, upper) of the discrete ``w'' - c w'``.

    The upper coefficient is nonnegative exactly when h <= 2/c.
    """
    h = grid.h
    lower = 1.0 / h**2 + c / (2.0 * h)
    upper = 1.0 / h**2 - c / (2.0 * h)
    return lower, -2.0 / h**2, upper


def banded_operator(grid: Grid, c: float, beta: float) -> FloatArray:
    """
    Banded storage of the interior rows of the Dirichlet problem matrix.

    The boundary nodes are not unknowns; ``solve_banded_bvp`` moves their
    contributions to the right-hand side. The matrix is strictly diagonally
    dominant by rows and columns, so LAPACK never pivots.
    """
    if not beta > 0:
        raise ValidationError(f"beta must be positive for an invertible operator, got {beta}")
    grid.check_speed(c)
    lower, centre, upper = stencil(grid, c)
    m = grid.n - 2
    # solve_banded never reads ab[0, 0] or ab[2, -1]; they hold the couplings
    # to the right and left boundary nodes
    return np.array((np.full(m, upper), np.full(m, centre - beta), np.full(m, lower)))


def solve_banded_bvp(
    ab: FloatArray, rhs: FloatArray, left_bc: float | FloatArray, right_bc: float | FloatArray
) -> FloatArray:
    """
    Solve with a prebuilt banded operator.

    ``rhs`` may be (n,) or (n, k) to solve k right-hand sides at once; its
    boundary rows are ignored and the Dirichlet data is written there as given.
    """
    upper, lower = ab[0, 0], ab[2, -1]
    b = np.array(rhs[1:-1], dtype=np.float64, copy=True)
    b[0] -= lower * np.asarray(left_bc, dtype=np.float64)
    b[-1] -= upper * np.asarray(right_bc, dtype=np.float64)
    out = np.empty(np.shape(rhs), dtype=np.float64)
    out[0] = left_bc
    out[-1] = right_bc
    out[1:-1] = scipy.linalg.solve_banded((1, 1), ab, b, check_finite=False)
    return out


def solve_linear_bvp(
    grid: Grid,
    c: float,
    beta: float,
    rhs: SampledFunction,
    left_bc: float,
    right_bc: float,
) -> SampledFunction:
    """
    Solve ``w'' - c w' - beta w = rhs`` at interior nodes with
    ``w(-L) = left_bc`` and ``w(L) = right_bc``.

    Args:
        grid: Mesh; must satisfy h < 2/c.
        c: Wave speed multiplying the first derivative.
        beta: Positive penalization constant.
        rhs: Right-hand side sampled on ``grid``.
        left_bc: Dirichlet value at -L.
        right_bc: Dirichlet value at L.

    Returns:
        The discrete solution on ``grid``.

    Raises:
        ValidationError: If beta is not positive.
        GridError: If ``rhs`` lives on another grid or h >= 2/c.
    """
    if rhs.grid != grid:
        raise GridError("right-hand side is sampled on a different grid")
    ab = banded_operator(grid, c, beta)
    return SampledFunction(grid, solve_banded_bvp(ab, rhs.values, left_bc, right_bc))


def manufactured_error(grid: Grid, c: float, beta: float, lam: float) -> float:
    """
    Sup-norm error of the discrete solution for ``y = exp(lam xi)``.

    The right-hand side is ``(lam^2 - c lam - beta) exp(lam xi)`` with exact
    boundary data, so the error is the pure discretization error.
    """
    xi = grid.nodes
    exact = np.exp(lam * xi)
    rhs = SampledFunction(grid, (lam * lam - c * lam - beta) * exact)
    approx = solve_linear_bvp(grid, c, beta, rhs, float(exact[0]), float(exact[-1]))
    return float(np.max(np.abs(approx.values - exact)))
