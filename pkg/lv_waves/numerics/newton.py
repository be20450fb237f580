"""Damped Newton for phase-pinned traveling-wave problems.

The translation invariance of a front is removed by a phase row that pins
the first component at the centre node instead of imposing a Dirichlet
condition at -L; the left end of that component is left free and the
discrete equations march the tail out of the core.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from lv_waves.exceptions import ConvergenceError
from lv_waves.params import ModelParams
from lv_waves.type_defs import FloatArray

from .bvp import stencil
from .grid import Grid
from .residual import apply_operator

logger = logging.getLogger(__name__)

Triplets = tuple[FloatArray, FloatArray, FloatArray]
ResidualFn = Callable[[FloatArray], FloatArray]
JacobianFn = Callable[[FloatArray], scipy.sparse.csc_matrix]


@dataclass
class NewtonResult:
    """Outcome of a converged Newton solve."""

    x: FloatArray
    residual: float
    steps: int
    history: list[float] = field(default_factory=list)


def interior_triplets(grid: Grid, c: float, diagonal: FloatArray, offset: int = 0) -> Triplets:
    """
    COO triplets of ``w'' - c w' + diag(diagonal) w`` on interior rows.

    ``diagonal`` has one entry per interior node; ``offset`` moves both rows
    and columns into a block of a larger system.
    """
    lower, centre, upper = stencil(grid, c)
    rows = np.arange(1, grid.n - 1) + offset
    m = rows.size
    return (
        np.concatenate([rows, rows, rows]),
        np.concatenate([rows - 1, rows, rows + 1]),
        np.concatenate([np.full(m, lower), centre + diagonal, np.full(m, upper)]),
    )


def coupling_triplets(grid: Grid, values: FloatArray, row_offset: int, col_offset: int) -> Triplets:
    """COO triplets of an interior diagonal coupling block."""
    rows = np.arange(1, grid.n - 1)
    return rows + row_offset, rows + col_offset, values


def assemble(size: int, *blocks: Triplets) -> scipy.sparse.csc_matrix:
    rows = np.concatenate([b[0] for b in blocks])
    cols = np.concatenate([b[1] for b in blocks])
    data = np.concatenate([b[2] for b in blocks])
    return scipy.sparse.coo_matrix((data, (rows, cols)), shape=(size, size)).tocsc()


def point(row: int, col: int, value: float) -> Triplets:
    return np.array([row]), np.array([col]), np.array([value], dtype=np.float64)


def damped_newton(
    residual: ResidualFn,
    jacobian: JacobianFn,
    x0: FloatArray,
    *,
    tol: float = 1e-9,
    max_steps: int = 100,
    max_halvings: int = 40,
) -> NewtonResult:
    """
    Newton's method with step halving until the sup-norm residual decreases.

    Once the tolerance is met one more full step is taken when it does not
    increase the residual, which brings quadratically convergent solves to
    rounding level.

    Raises:
        ConvergenceError: If a step cannot decrease the residual, the
            iterate stops being finite, or ``max_steps`` is exhausted. The
            residual history is attached as ``trace``.
    """
    x = np.array(x0, dtype=np.float64, copy=True)
    res = residual(x)
    norm = float(np.max(np.abs(res)))
    history = [norm]
    steps = 0
    while norm >= tol:
        if steps >= max_steps:
            raise ConvergenceError(
                f"Newton did not converge in {max_steps} steps (residual {norm:.3e})",
                trace=history,
            )
        dx = scipy.sparse.linalg.spsolve(jacobian(x), -res)
        if not np.all(np.isfinite(dx)):
            raise ConvergenceError("Newton step is not finite", trace=history)
        damping = 1.0
        trial, trial_res, trial_norm = x, res, norm
        for _ in range(max_halvings):
            trial = x + damping * dx
            trial_res = residual(trial)
            trial_norm = float(np.max(np.abs(trial_res)))
            if np.isfinite(trial_norm) and trial_norm < norm:
                break
            damping /= 2.0
        else:
            raise ConvergenceError(
                f"Newton damping failed to decrease the residual {norm:.3e}",
                trace=history,
            )
        x, res, norm = trial, trial_res, trial_norm
        steps += 1
        history.append(norm)
        logger.debug("Newton step %d: damping %g, residual %.3e", steps, damping, norm)

    if norm > 0:
        dx = scipy.sparse.linalg.spsolve(jacobian(x), -res)
        trial = x + dx
        trial_res = residual(trial)
        trial_norm = float(np.max(np.abs(trial_res)))
        if np.isfinite(trial_norm) and trial_norm <= norm:
            x, norm = trial, trial_norm
            steps += 1
            history.append(norm)
    return NewtonResult(x=x, residual=norm, steps=steps, history=history)


def scalar_system(
    grid: Grid,
    c: float,
    f: Callable[[FloatArray], FloatArray],
    df: Callable[[FloatArray], FloatArray],
    phase: float,
    right: float,
) -> tuple[ResidualFn, JacobianFn]:
    """
    Residual and Jacobian of ``w'' - c w' + f(w) = 0`` with the phase row
    ``w(0) = phase`` in place of a left condition and ``w(L) = right``.
    """
    n, mid = grid.n, grid.mid

    def residual(w: FloatArray) -> FloatArray:
        out = np.empty(n)
        out[0] = w[mid] - phase
        out[1:-1] = apply_operator(grid, c, w) + f(w[1:-1])
        out[-1] = w[-1] - right
        return out

    def jacobian(w: FloatArray) -> scipy.sparse.csc_matrix:
        return assemble(
            n,
            interior_triplets(grid, c, df(w[1:-1])),
            point(0, mid, 1.0),
            point(n - 1, n - 1, 1.0),
        )

    return residual, jacobian


def coupled_system(
    grid: Grid,
    p: ModelParams,
    c: float,
    phase: float = 0.5,
    left_v: float | None = None,
) -> tuple[ResidualFn, JacobianFn]:
    """
    Residual and Jacobian of the transformed wave system on [u; v].

    The u block has the phase row ``u(0) = phase`` and ``u(L) = 1``. The v
    block has ``v(L) = 1`` and, at -L, either the fixed value ``left_v`` or
    the tail relation ``v = kappa u`` with ``kappa = r a2 / (1 - a1 + r)``.
    """
    n, mid = grid.n, grid.mid
    kappa = p.tail_ratio

    def residual(x: FloatArray) -> FloatArray:
        u, v = x[:n], x[n:]
        f1, f2 = p.reaction(u[1:-1], v[1:-1])
        out = np.empty(2 * n)
        out[0] = u[mid] - phase
        out[1 : n - 1] = apply_operator(grid, c, u) + f1
        out[n - 1] = u[-1] - 1.0
        out[n] = v[0] - (kappa * u[0] if left_v is None else left_v)
        out[n + 1 : 2 * n - 1] = apply_operator(grid, c, v) + f2
        out[2 * n - 1] = v[-1] - 1.0
        return out

    def jacobian(x: FloatArray) -> scipy.sparse.csc_matrix:
        u, v = x[:n], x[n:]
        a11, a12, a21, a22 = p.jacobian(u[1:-1], v[1:-1])
        blocks = [
            interior_triplets(grid, c, a11),
            coupling_triplets(grid, a12, 0, n),
            interior_triplets(grid, c, a22, offset=n),
            coupling_triplets(grid, a21, n, 0),
            point(0, mid, 1.0),
            point(n - 1, n - 1, 1.0),
            point(n, n, 1.0),
            point(2 * n - 1, 2 * n - 1, 1.0),
        ]
        if left_v is None:
            blocks.append(point(n, 0, -kappa))
        return assemble(2 * n, *blocks)

    return residual, jacobian
