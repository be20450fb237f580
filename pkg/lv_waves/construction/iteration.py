"""Monotone iteration between an ordered upper/lower pair.

Each step solves the two decoupled linear problems

    w'' - c w' - beta w = -beta U_k - F(U_k)

with the shared banded operator. Starting from the upper solution the
iterates decrease toward the wave and stay above the lower solution; the
ascending variant starts from the lower solution instead.
"""

import logging
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from lv_waves.exceptions import ConvergenceError, QuasimonotonicityBroken, ValidationError
from lv_waves.numerics.bvp import banded_operator, solve_banded_bvp
from lv_waves.numerics.grid import Grid, WaveProfile
from lv_waves.numerics.newton import coupled_system, damped_newton
from lv_waves.numerics.residual import apply_operator
from lv_waves.params import ModelParams, iteration_beta
from lv_waves.type_defs import FloatArray, LeftData
from lv_waves.utils import level_crossing

from .pair import OrderedPair

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IterationOptions:
    """
    Knobs of :func:`monotone_iterate`.

    Iteration stops once the sup-norm step is below ``step_tol`` and the
    discrete residual is below ``residual_tol``.
    """

    beta: float | None = None
    step_tol: float = 1e-10
    residual_tol: float = 1e-9
    max_iterations: int = 100_000
    ordering_slack: float = 1e-12
    left_data: LeftData = "tail"
    start: Literal["upper", "lower"] = "upper"
    normalize: bool = True
    polish: bool = True
    record_nodes: tuple[int, ...] = ()
    log_every: int = 1000


@dataclass
class IterationTrace:
    """Per-step record of a monotone iteration."""

    beta: float
    start: str
    iterations: int = 0
    residuals: list[float] = field(default_factory=list)
    step_norms: list[float] = field(default_factory=list)
    monotone_flags: list[bool] = field(default_factory=list)
    cooperative_flags: list[bool] = field(default_factory=list)
    box_flags: list[bool] = field(default_factory=list)
    node_history: dict[int, list[tuple[float, float]]] = field(default_factory=dict)
    shift: float = 0.0
    polish_steps: int = 0
    final_residuals: tuple[float, float] = (float("nan"), float("nan"))

    @property
    def all_monotone(self) -> bool:
        return all(self.monotone_flags)

    @property
    def cooperative(self) -> bool:
        return all(self.cooperative_flags)

    def record(self, u: FloatArray, v: FloatArray) -> None:
        for node, history in self.node_history.items():
            history.append((float(u[node]), float(v[node])))


def left_boundary(pair: OrderedPair, p: ModelParams, left_data: LeftData) -> tuple[float, float]:
    """Dirichlet data at -L for both components."""
    if left_data == "equilibrium":
        return 0.0, 0.0
    lower_u = float(pair.lower.u.values[0])
    v = float(
        np.clip(p.tail_ratio * lower_u, pair.lower.v.values[0], pair.upper.v.values[0])
    )
    return lower_u, v


def iteration_residual(grid: Grid, p: ModelParams, c: float, u: FloatArray, v: FloatArray) -> float:
    f1, f2 = p.reaction(u[1:-1], v[1:-1])
    r1 = apply_operator(grid, c, u) + f1
    r2 = apply_operator(grid, c, v) + f2
    return float(max(np.max(np.abs(r1)), np.max(np.abs(r2))))


def extend_left(nodes: FloatArray, values: FloatArray, amount: float) -> FloatArray:
    """
    Sample ``w(xi + amount)``, extrapolating log-linearly past -L and by 1
    past +L.
    """
    shifted = np.interp(nodes + amount, nodes, values, right=1.0)
    outside = nodes + amount < nodes[0]
    if np.any(outside) and values[0] > 0 and values[1] > values[0]:
        slope = (np.log(values[1]) - np.log(values[0])) / (nodes[1] - nodes[0])
        shifted[outside] = values[0] * np.exp(slope * (nodes[outside] + amount - nodes[0]))
    return np.asarray(shifted, dtype=np.float64)


def normalize_wave(
    grid: Grid, p: ModelParams, c: float, u: FloatArray, v: FloatArray, polish: bool, trace: IterationTrace
) -> tuple[FloatArray, FloatArray]:
    """Translate to u(0) = 1/2 and refine with the phase-pinned coupled Newton."""
    crossing = level_crossing(grid.nodes, u, 0.5)
    if crossing is None:
        logger.warning("Converged iterate never crosses u = 1/2; leaving it unnormalized")
        return u, v
    trace.shift = crossing
    u = extend_left(grid.nodes, u, crossing)
    v = extend_left(grid.nodes, v, crossing)
    if not polish:
        return u, v
    residual, jacobian = coupled_system(grid, p, c, phase=0.5)
    result = damped_newton(residual, jacobian, np.concatenate([u, v]), tol=1e-10)
    trace.polish_steps = result.steps
    return result.x[: grid.n], result.x[grid.n :]


def monotone_iterate(
    pair: OrderedPair, p: ModelParams, c: float, opts: IterationOptions | None = None
) -> tuple[WaveProfile, IterationTrace]:
    """
    Run the monotone iteration from the pair to the traveling wave.

    Args:
        pair: Ordered upper/lower solutions.
        p: Model parameters.
        c: Wave speed.
        opts: Iteration options; defaults are used when omitted.

    Returns:
        The converged profile, normalized to u(0) = 1/2 unless disabled,
        and the iteration trace.

    Raises:
        ValidationError: If ``opts.beta`` is below the monotonicity bound.
        QuasimonotonicityBroken: If an iterate leaves the sandwich.
        ConvergenceError: If ``opts.max_iterations`` is exhausted.
    """
    opts = opts or IterationOptions()
    grid = pair.grid
    beta_min = iteration_beta(p)
    beta = beta_min if opts.beta is None else opts.beta
    if beta < beta_min:
        raise ValidationError(f"beta = {beta} is below the monotonicity bound {beta_min}")

    trace = IterationTrace(beta=beta, start=opts.start)
    trace.node_history = {node: [] for node in opts.record_nodes}
    ab = banded_operator(grid, c, beta)
    left = np.array(left_boundary(pair, p, opts.left_data))
    right = np.ones(2)
    lower = np.stack([pair.lower.u.values, pair.lower.v.values], axis=1)
    upper = np.stack([pair.upper.u.values, pair.upper.v.values], axis=1)
    descending = opts.start == "upper"
    current = (upper if descending else lower).copy()
    trace.record(current[:, 0], current[:, 1])
    slack = opts.ordering_slack

    while True:
        if trace.iterations >= opts.max_iterations:
            raise ConvergenceError(
                f"monotone iteration did not converge in {opts.max_iterations} iterations",
                trace=trace,
            )
        f1, f2 = p.reaction(current[:, 0], current[:, 1])
        rhs = -beta * current - np.stack([f1, f2], axis=1)
        new = solve_banded_bvp(ab, rhs, left, right)
        trace.iterations += 1

        if descending:
            ordered = bool(np.all(new <= current + slack) and np.all(new >= lower - slack))
        else:
            ordered = bool(np.all(new >= current - slack) and np.all(new <= upper + slack))
        trace.monotone_flags.append(ordered)
        trace.box_flags.append(bool(np.all(new >= -slack) and np.all(new <= 1.0 + slack)))
        trace.cooperative_flags.append(
            bool(
                np.all(p.a1 * new[:, 0] >= -slack)
                and np.all(p.r * p.a2 * (1.0 - new[:, 1]) >= -slack)
            )
        )
        if not ordered:
            bad = np.flatnonzero(
                np.any((new > current + slack) | (new < lower - slack), axis=1)
                if descending
                else np.any((new < current - slack) | (new > upper + slack), axis=1)
            )
            raise QuasimonotonicityBroken(
                f"quasimonotonicity broken at iteration {trace.iterations}, node {int(bad[0])}",
                trace=trace,
            )

        step = float(np.max(np.abs(new - current)))
        residual = iteration_residual(grid, p, c, new[:, 0], new[:, 1])
        trace.step_norms.append(step)
        trace.residuals.append(residual)
        trace.record(new[:, 0], new[:, 1])
        current = new
        if trace.iterations % opts.log_every == 0:
            logger.debug(
                "Iteration %d: step %.3e, residual %.3e", trace.iterations, step, residual
            )
        if step < opts.step_tol and residual < opts.residual_tol:
            break

    logger.info(
        "Monotone iteration from the %s solution converged in %d iterations (residual %.2e)",
        opts.start,
        trace.iterations,
        trace.residuals[-1],
    )
    u, v = current[:, 0].copy(), current[:, 1].copy()
    if opts.normalize:
        u, v = normalize_wave(grid, p, c, u, v, opts.polish, trace)
    profile = WaveProfile.from_arrays(grid, u, v, shift=trace.shift)
    f1, f2 = p.reaction(u[1:-1], v[1:-1])
    trace.final_residuals = (
        float(np.max(np.abs(apply_operator(grid, c, u) + f1))),
        float(np.max(np.abs(apply_operator(grid, c, v) + f2))),
    )
    return profile, trace
