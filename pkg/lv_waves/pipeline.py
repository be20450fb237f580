"""Stages behind the command line: construct, iterate, fit, simulate, verify.

Each stage is a plain function on library types; the async helpers run the
CPU-bound stages in worker threads so that sweeps and snapshot writing can
proceed concurrently.
"""

import asyncio
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

import numpy as np
from asgiref.sync import sync_to_async

from .asymptotics import RateComparison, compare_rates
from .construction import (
    UpperLowerReport,
    IterationOptions,
    IterationTrace,
    OrderedPair,
    UpperLowerConfig,
    build_pair,
    check_upper_lower_inequalities,
    choose_l,
    monotone_iterate,
)
from .construction.pair import l_interval
from .exceptions import BelowMinimalSpeed, HypothesisError, LVWaveError
from .layers import InMemorySnapshotLayer, get_snapshot_layer, register_snapshot_layer
from .numerics.bvp import manufactured_error
from .numerics.grid import Grid, WaveProfile
from .numerics.residual import discrete_residual
from .params import (
    ModelParams,
    classify_speed,
    minimal_speed,
    validate_hypotheses,
)
from .reports import write_kpp_profile, write_profile, write_report, write_rows, write_trace
from .simulation import SimConfig, SimTrace, SnapshotWriter, estimate_speed, simulate
from .type_defs import WaveReportDict
from .utils import gather_bounded
from .verification import (
    monotonicity_certificate,
    sliding_comparison,
    subcritical_diagnostic,
    uniqueness_check,
)

logger = logging.getLogger(__name__)

SNAPSHOT_LAYER_ALIAS = "snapshots"
SWEEP_FIELDS = [
    "c",
    "regime",
    "status",
    "residual_u",
    "residual_v",
    "iterations",
    "rate_minus_u",
    "rate_minus_v",
    "rate_plus_u",
    "rate_plus_v",
    "error",
]


@dataclass
class WaveRun:
    """Everything produced by one wave construction."""

    params: ModelParams
    c: float
    grid: Grid
    pair: OrderedPair
    inequalities: UpperLowerReport
    profile: WaveProfile
    trace: IterationTrace
    residuals: tuple[float, float]
    comparisons: list[RateComparison] = field(default_factory=list)
    residual_tol: float = 1e-6
    cross_check_distance: float | None = None

    @property
    def residual_ok(self) -> bool:
        return max(self.residuals) < self.residual_tol

    @property
    def passed(self) -> bool:
        return self.residual_ok and all(item.passed for item in self.comparisons)

    def report(self) -> WaveReportDict:
        cfg = self.pair.config
        assert cfg is not None and cfg.nu is not None and cfg.nu_applied is not None
        return {
            "params": self.params.as_dict(),
            "c": self.c,
            "regime": classify_speed(self.params, self.c).regime,
            "L": self.grid.L,
            "h": self.grid.h,
            "l": cfg.l,
            "nu": cfg.nu,
            "nu_applied": cfg.nu_applied,
            "beta": self.trace.beta,
            "iterations": self.trace.iterations,
            "final_residuals": list(self.residuals),
            "comparisons": [item.as_dict() for item in self.comparisons],
            "cross_check_distance": self.cross_check_distance,
            "passed": self.passed,
        }


def require_hypotheses(p: ModelParams) -> None:
    report = validate_hypotheses(p)
    if not report.all_pass:
        raise HypothesisError(f"hypotheses H1-H3 do not hold: {report.as_dict()}")


def run_wave(
    p: ModelParams,
    c: float,
    L: float = 60.0,
    h: float = 0.02,
    tol: float = 0.03,
    residual_tol: float = 1e-6,
    l: float | None = None,  # noqa: E741
    opts: IterationOptions | None = None,
    with_rates: bool = True,
    cross_check: bool = False,
) -> WaveRun:
    """
    Construct the wave of speed ``c``: ordered pair, upper/lower inequality
    check, monotone iteration, residuals and rate comparisons.

    With ``cross_check`` the ascending iteration from the lower solution is
    run as well and its sup distance to the descending wave is recorded.

    Raises:
        HypothesisError: If H1-H3 fail.
        BelowMinimalSpeed: If c < c*; the subcritical diagnostic is attached.
        ConvergenceError: If the iteration or a Newton solve fails.
    """
    require_hypotheses(p)
    if classify_speed(p, c).regime == "subcritical":
        diagnostic = subcritical_diagnostic(p, c)
        raise BelowMinimalSpeed("no monotone wave below c*", diagnostic=diagnostic)
    grid = Grid.from_spacing(L, h, c)
    pair = build_pair(p, c, grid, UpperLowerConfig(l=choose_l(p) if l is None else l))
    inequalities = check_upper_lower_inequalities(pair, p, c)
    if not inequalities.holds:
        logger.warning("Upper/lower inequalities violated: %s", "; ".join(inequalities.violations))
    profile, trace = monotone_iterate(pair, p, c, opts)
    distance: float | None = None
    if cross_check:
        ascending, _ = monotone_iterate(pair, p, c, replace(opts or IterationOptions(), start="lower"))
        distance = max(
            float(np.max(np.abs(profile.component(name) - ascending.component(name))))
            for name in ("u", "v")
        )
        logger.info("Ascending and descending waves differ by %.3e", distance)
    residuals = discrete_residual(profile, p, c)
    comparisons = compare_rates(profile, p, c, tol) if with_rates else []
    run = WaveRun(
        params=p,
        c=c,
        grid=grid,
        pair=pair,
        inequalities=inequalities,
        profile=profile,
        trace=trace,
        residuals=residuals,
        comparisons=comparisons,
        residual_tol=residual_tol,
        cross_check_distance=distance,
    )
    logger.info("Wave at c=%g: residuals %s, passed=%s", c, residuals, run.passed)
    return run


def write_wave_artifacts(run: WaveRun, out: Path, format: str = "json") -> list[Path]:
    """Profile CSV, KPP fronts, sidecar report and the flat rate table."""
    artifacts = [write_profile(out / "profile.csv", run.profile)]
    for name, wave in run.pair.kpp_waves.items():
        meta = {"d1": wave.spec.d1, "d2": wave.spec.d2, "b": wave.spec.b, "c": wave.c}
        artifacts.append(
            write_kpp_profile(out / f"kpp_{name}.csv", run.grid.nodes, wave.profile.values, meta)
        )
    artifacts.append(write_report(out / "report", run.report(), format))
    comparisons = [item.as_dict() for item in run.comparisons]
    artifacts.append(
        write_rows(
            out / "comparisons.csv",
            comparisons,  # type: ignore[arg-type]
            ["end", "component", "predicted", "fitted", "relative_error", "passed", "polynomial_detected"],
        )
    )
    return artifacts


def sweep_row(p: ModelParams, c: float, **settings: Any) -> dict[str, Any]:
    """One summary row; mathematical failures become ``fail`` rows."""
    row: dict[str, Any] = {"c": c}
    try:
        row["regime"] = classify_speed(p, c).regime
        run = run_wave(p, c, **settings)
    except BelowMinimalSpeed as exc:
        row.update(status="fail", error=str(exc))
        if exc.diagnostic is not None:
            row["error"] = f"{exc}; discriminant {exc.diagnostic.discriminant:.17g}"
        return row
    except LVWaveError as exc:
        row.update(status="error", error=str(exc))
        return row
    rates = {(item.end, item.component): item.fitted for item in run.comparisons}
    row.update(
        status="pass" if run.passed else "fail",
        residual_u=run.residuals[0],
        residual_v=run.residuals[1],
        iterations=run.trace.iterations,
        rate_minus_u=rates.get(("minus_inf", "u")),
        rate_minus_v=rates.get(("minus_inf", "v")),
        rate_plus_u=rates.get(("plus_inf", "u")),
        rate_plus_v=rates.get(("plus_inf", "v")),
    )
    return row


async def sweep(
    p: ModelParams, speeds: list[float], jobs: int = 1, **settings: Any
) -> list[dict[str, Any]]:
    """
    Run :func:`sweep_row` for every speed with at most ``jobs`` in flight.

    Rows come back in speed order regardless of completion order.
    """
    run_row = sync_to_async(sweep_row, thread_sensitive=False)

    def factory(c: float) -> Any:
        return lambda: run_row(p, c, **settings)

    return await gather_bounded([factory(c) for c in speeds], jobs)


def snapshot_layer(capacity: int) -> InMemorySnapshotLayer:
    """
    The registered snapshot layer. A new layer is registered on first use or
    when ``capacity`` differs from the registered one; runs already holding
    the old layer keep it.
    """
    layer = get_snapshot_layer(SNAPSHOT_LAYER_ALIAS)
    if not isinstance(layer, InMemorySnapshotLayer) or layer.capacity != capacity:
        layer = InMemorySnapshotLayer(capacity=capacity)
        register_snapshot_layer(SNAPSHOT_LAYER_ALIAS, layer)
    return layer


async def run_simulation(
    p: ModelParams,
    cfg: SimConfig,
    snapshots_path: Path | None = None,
    snapshot_capacity: int = 64,
) -> SimTrace:
    """
    Run the simulator in a worker thread while an async writer drains the
    snapshot channel.
    """
    if not cfg.snapshot_every:
        return await sync_to_async(simulate, thread_sensitive=False)(p, cfg)
    layer = snapshot_layer(snapshot_capacity)
    layer.bind_loop()
    channel = await layer.new_channel()
    writer = SnapshotWriter(layer, channel, snapshots_path)
    task = asyncio.create_task(writer.run())
    try:
        trace = await sync_to_async(simulate, thread_sensitive=False)(p, cfg, layer, channel)
        await layer.send(channel, {"type": "simulation.complete", "t": float(trace.times[-1])})
        await task
    except BaseException:
        task.cancel()
        raise
    finally:
        layer.discard(channel)
    if trace.dropped_snapshots:
        logger.warning("Dropped %d snapshots of %d", trace.dropped_snapshots, len(trace.snapshot_times))
    return trace


def simulation_summary(p: ModelParams, cfg: SimConfig, trace: SimTrace, burn_in: float) -> dict[str, Any]:
    """Summary report; the speed estimate is None when it cannot be formed."""
    summary: dict[str, Any] = {
        "params": p.as_dict(),
        "X": cfg.X,
        "dx": cfg.dx,
        "dt": cfg.dt,
        "T": cfg.T,
        "level": cfg.level,
        "init": cfg.init,
        "scheme": cfg.scheme,
        "c_star": minimal_speed(p),
        "final_front": float(trace.fronts[-1]),
        "snapshots": len(trace.snapshot_times),
        "dropped_snapshots": trace.dropped_snapshots,
        "box": [float(min(trace.u.min(), trace.v.min())), float(max(trace.u.max(), trace.v.max()))],
    }
    try:
        summary["speed"] = estimate_speed(trace, burn_in).as_dict()
    except LVWaveError as exc:
        summary["speed"] = None
        summary["speed_error"] = str(exc)
    return summary


def write_simulation_artifacts(trace: SimTrace, summary: dict[str, Any], out: Path, format: str) -> list[Path]:
    return [
        write_trace(out / "trace.csv", trace.times, trace.fronts),
        write_report(out / "summary", summary, format),
    ]


def other_l(p: ModelParams, l: float) -> float:  # noqa: E741
    """A second admissible l for the uniqueness check."""
    lower, upper = l_interval(p)
    candidate = (lower + l) / 2.0
    return candidate if abs(candidate - l) > 1e-3 else (l + upper) / 2.0


def verify_bundle(
    p: ModelParams,
    c: float,
    profile: WaveProfile,
    l: float,  # noqa: E741
    uniqueness_tol: float = 1e-4,
) -> dict[str, Any]:
    """
    The four certificates for a stored wave: sliding comparison on the
    rebuilt pair, uniqueness against a wave built with another l,
    monotonicity, and the subcritical diagnostic at c*/2.
    """
    require_hypotheses(p)
    grid = profile.grid
    pair = build_pair(p, c, grid, UpperLowerConfig(l=l))
    comparison = sliding_comparison(pair.upper, pair.lower, p, c, grid.L)
    second_l = other_l(p, l)
    second = run_wave(p, c, grid.L, grid.h, l=second_l, with_rates=False)
    uniqueness = uniqueness_check(profile, second.profile, uniqueness_tol)
    monotonicity = monotonicity_certificate(profile, p, c)
    subcritical = subcritical_diagnostic(p, minimal_speed(p) / 2.0)
    bundle = {
        "params": p.as_dict(),
        "c": c,
        "sliding_comparison": comparison.as_dict(),
        "uniqueness": {**uniqueness.as_dict(), "l": l, "other_l": second_l},
        "monotonicity": monotonicity.as_dict(),
        "subcritical": subcritical.as_dict(),
    }
    bundle["passed"] = bool(
        comparison.ordered and uniqueness.passed and monotonicity.passed and subcritical.evidence
    )
    return bundle


def refinement_study(p: ModelParams, c: float, L: float = 60.0, h: float = 0.02) -> dict[str, Any]:
    """
    Compare waves computed with spacing h and h/2 on the shared nodes, and
    the manufactured linear problem error at both spacings.
    """
    coarse = run_wave(p, c, L, h, with_rates=False)
    fine = run_wave(p, c, L, h / 2.0, with_rates=False)
    profile_change = max(
        float(np.max(np.abs(coarse.profile.component(name) - fine.profile.component(name)[::2])))
        for name in ("u", "v")
    )
    grid = Grid.from_spacing(5.0, h, c)
    errors = [manufactured_error(g, c, 1.0, 0.5) for g in (grid, grid.refined())]
    return {
        "h": h,
        "profile_change": profile_change,
        "bvp_errors": errors,
        "bvp_ratio": errors[0] / errors[1] if errors[1] > 0 else None,
    }
