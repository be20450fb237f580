"""Time integration of the competition system in original variables.

    u_t = u_xx + u (1 - u - a1 v)
    v_t = v_xx + r v (1 - a2 u - v)

on [0, X] with zero-flux ends. Diffusion is implicit (one banded solve for
both components per step) and reaction explicit; the fully explicit scheme
is kept as an option.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Literal

import numpy as np
import scipy.linalg

from lv_waves.exceptions import ChannelFull, SimulationBlowUp, ValidationError
from lv_waves.layers import BaseSnapshotLayer
from lv_waves.numerics.grid import WaveProfile
from lv_waves.params import ModelParams, require_h1, to_original
from lv_waves.type_defs import FloatArray, InitialKind
from lv_waves.utils import level_crossing

if TYPE_CHECKING:
    from .speed import SpeedEstimate

logger = logging.getLogger(__name__)

Scheme = Literal["imex", "explicit"]


@dataclass(frozen=True)
class SimConfig:
    """
    Settings of one parabolic run.

    ``wave`` and ``x0`` are only used with ``init="wave"``: the transformed
    profile is placed so that its xi = 0 sits at ``x0`` (default X/2).
    """

    X: float = 400.0
    dx: float = 0.1
    dt: float = 0.1
    T: float = 200.0
    level: float = 0.5
    init: InitialKind = "step"
    scheme: Scheme = "imex"
    wave: WaveProfile | None = None
    x0: float | None = None
    snapshot_every: int | None = None

    def __post_init__(self) -> None:
        for name in ("X", "dx", "dt"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise ValidationError(f"{name} must be positive, got {value}")
        if not math.isfinite(self.T) or self.T < 0:
            raise ValidationError(f"final time T must be nonnegative, got {self.T}")
        if not 0 < self.level < 1:
            raise ValidationError(f"tracking level must lie in (0, 1), got {self.level}")
        if self.scheme == "explicit" and self.dt > self.dx**2 / 2:
            raise ValidationError(
                f"explicit diffusion needs dt <= dx^2/2 = {self.dx**2 / 2}, got {self.dt}"
            )
        if self.init == "wave" and self.wave is None:
            raise ValidationError("wave initial data needs a wave profile")
        if self.snapshot_every is not None and self.snapshot_every < 1:
            raise ValidationError(f"snapshot_every must be positive, got {self.snapshot_every}")

    @property
    def n(self) -> int:
        return int(round(self.X / self.dx)) + 1

    @property
    def steps(self) -> int:
        return int(round(self.T / self.dt))

    @property
    def nodes(self) -> FloatArray:
        return np.linspace(0.0, self.X, self.n)


@dataclass
class SimTrace:
    """Front history and final fields of a run, in original variables."""

    x: FloatArray
    times: FloatArray
    fronts: FloatArray
    u: FloatArray
    v: FloatArray
    snapshot_times: list[float] = field(default_factory=list)
    dropped_snapshots: int = 0
    speed: "SpeedEstimate | None" = None


def initial_fields(cfg: SimConfig) -> tuple[FloatArray, FloatArray]:
    """Initial (u, v) in original variables."""
    x = cfg.nodes
    if cfg.init == "step":
        u = np.where(x <= 5.0, 1.0, 0.0)
    elif cfg.init == "smoothed_step":
        u = (1.0 - np.tanh(x - 5.0)) / 2.0
    else:
        assert cfg.wave is not None
        x0 = cfg.X / 2.0 if cfg.x0 is None else cfg.x0
        nodes = cfg.wave.grid.nodes
        u = np.interp(x - x0, nodes, cfg.wave.u.values, left=0.0, right=1.0)
        v_transformed = np.interp(x - x0, nodes, cfg.wave.v.values, left=0.0, right=1.0)
        return np.asarray(u, dtype=np.float64), to_original(v_transformed)
    return np.asarray(u, dtype=np.float64), np.asarray(1.0 - u, dtype=np.float64)


def diffusion_operator(n: int, k: float) -> FloatArray:
    """
    Banded storage of ``I - k D2`` with Neumann ghost nodes, ``k = dt/dx^2``.
    """
    super_diag = np.full(n, -k)
    main_diag = np.full(n, 1.0 + 2.0 * k)
    sub_diag = np.full(n, -k)
    super_diag[0] = -2.0 * k  # reflected ghost at x = 0
    sub_diag[-1] = -2.0 * k  # reflected ghost at x = X
    return np.array((np.roll(super_diag, 1), main_diag, np.roll(sub_diag, -1)))


def laplacian(fields: FloatArray, dx: float) -> FloatArray:
    """Neumann second difference of an (n, 2) field array."""
    out = np.empty_like(fields)
    out[1:-1] = fields[:-2] - 2.0 * fields[1:-1] + fields[2:]
    out[0] = 2.0 * (fields[1] - fields[0])
    out[-1] = 2.0 * (fields[-2] - fields[-1])
    return out / dx**2


def emit(
    layer: BaseSnapshotLayer | None,
    channel: str | None,
    message: dict[str, object],
    trace: SimTrace,
) -> None:
    if layer is None or channel is None:
        return
    try:
        layer.send_nowait(channel, message)
    except ChannelFull:
        trace.dropped_snapshots += 1
        logger.warning("Snapshot channel %s is full; dropped %s", channel, message["type"])


def simulate(
    p: ModelParams,
    cfg: SimConfig,
    layer: BaseSnapshotLayer | None = None,
    channel: str | None = None,
    initial: tuple[FloatArray, FloatArray] | None = None,
) -> SimTrace:
    """
    Integrate the parabolic system and track the front of u.

    The front is the first crossing of ``cfg.level`` by u scanning left to
    right, interpolated linearly, and NaN when u does not cross. Snapshots
    of the fields are handed to ``layer`` every ``cfg.snapshot_every``
    steps without blocking; a full channel drops the snapshot. ``initial``
    overrides the initial fields given by ``cfg.init``.

    Raises:
        ValidationError: If H1 fails.
        SimulationBlowUp: If the fields stop being finite.
    """
    require_h1(p)
    x = cfg.nodes
    n, steps, dt = cfg.n, cfg.steps, cfg.dt
    u0, v0 = initial_fields(cfg) if initial is None else initial
    if u0.shape != (n,) or v0.shape != (n,):
        raise ValidationError(f"initial fields must have {n} values")
    fields = np.stack([u0, v0], axis=1)
    times = np.arange(steps + 1) * dt
    fronts = np.full(steps + 1, np.nan)
    trace = SimTrace(x=x, times=times, fronts=fronts, u=u0, v=v0)
    ab = diffusion_operator(n, dt / cfg.dx**2) if cfg.scheme == "imex" else None

    def record(step: int) -> None:
        crossing = level_crossing(x, fields[:, 0], cfg.level)
        fronts[step] = np.nan if crossing is None else crossing
        if cfg.snapshot_every and step % cfg.snapshot_every == 0:
            trace.snapshot_times.append(float(times[step]))
            emit(
                layer,
                channel,
                {
                    "type": "snapshot.fields",
                    "t": float(times[step]),
                    "x": x,
                    "u": fields[:, 0],
                    "v": fields[:, 1],
                },
                trace,
            )

    record(0)
    for step in range(1, steps + 1):
        fu, fv = p.original_reaction(fields[:, 0], fields[:, 1])
        explicit = fields + dt * np.stack([fu, fv], axis=1)
        if ab is None:
            fields = explicit + dt * laplacian(fields, cfg.dx)
        else:
            fields = scipy.linalg.solve_banded((1, 1), ab, explicit, check_finite=False)
        if not np.all(np.isfinite(fields)):
            raise SimulationBlowUp(
                f"fields stopped being finite at t = {times[step]}",
                last_valid_time=float(times[step - 1]),
            )
        record(step)

    trace.u = fields[:, 0].copy()
    trace.v = fields[:, 1].copy()
    logger.info(
        "Simulated %d steps to T=%g on %d nodes; final front at %s",
        steps,
        cfg.T,
        n,
        fronts[-1],
    )
    return trace
