"""Artifacts written by the command line.

Profiles and traces are CSV at 17 significant digits so that a rerun with
the same configuration produces identical bytes. Reports are dicts of
builtins encoded by a registered serializer; the run manifest is written
last.
"""

import csv
import logging
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .exceptions import ConfigError
from .numerics.grid import Grid, WaveProfile
from .serializers import registry
from .type_defs import FloatArray, ManifestDict, StageDict

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def to_builtin(value: Any) -> Any:
    """Convert numpy scalars and arrays to builtins and non-finite floats to None."""
    if isinstance(value, Mapping):
        return {str(key): to_builtin(item) for key, item in value.items()}
    if isinstance(value, list | tuple | np.ndarray):
        return [to_builtin(item) for item in value]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, float | np.floating):
        number = float(value)
        return number if math.isfinite(number) else None
    return value


def write_report(path: Path, report: Any, format: str = "json") -> Path:
    """
    Serialize ``report`` next to ``path`` with the format's extension.

    Returns:
        The path actually written.
    """
    serializer = registry.get_serializer(format)
    target = path.with_suffix(serializer.extension)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_bytes(serializer.serialize(to_builtin(report)))
    return target


def read_report(path: Path) -> Any:
    format = {".json": "json", ".msgpack": "msgpack"}.get(path.suffix)
    if format is None:
        raise ConfigError(f"unknown report extension: {path}")
    return registry.get_serializer(format).deserialize(path.read_bytes())


def _write_table(path: Path, header: str, columns: Iterable[FloatArray], comment: str = "") -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    data = np.column_stack(list(columns))
    full_header = f"# {comment}\n{header}" if comment else header
    np.savetxt(path, data, delimiter=",", fmt=FLOAT_FORMAT, header=full_header, comments="")
    return path


def _read_table(path: Path) -> FloatArray:
    with path.open() as handle:
        lines = [line for line in handle if line.strip() and not line.startswith("#")]
    if len(lines) < 2:
        raise ConfigError(f"{path} holds no data rows")
    return np.loadtxt(lines[1:], delimiter=",", ndmin=2)


def write_profile(path: Path, profile: WaveProfile) -> Path:
    return _write_table(path, "xi,u,v", (profile.grid.nodes, profile.u.values, profile.v.values))


def write_kpp_profile(path: Path, nodes: FloatArray, values: FloatArray, meta: Mapping[str, float]) -> Path:
    """KPP front as ``xi,w`` with a comment line carrying ``d1, d2, b, c``."""
    comment = " ".join(f"{key}={value:.17g}" for key, value in meta.items())
    return _write_table(path, "xi,w", (nodes, values), comment=comment)


def read_profile(path: Path) -> WaveProfile:
    """
    Load a ``xi,u,v`` profile.

    Raises:
        ConfigError: If the file is not a profile on a symmetric uniform grid.
    """
    data = _read_table(path)
    if data.shape[1] != 3:
        raise ConfigError(f"{path} is not an xi,u,v profile")
    xi = data[:, 0]
    grid = Grid(L=float(-xi[0]), n=xi.size)
    if not np.allclose(xi, grid.nodes, atol=1e-9):
        raise ConfigError(f"{path} is not sampled on a symmetric uniform grid")
    return WaveProfile.from_arrays(grid, data[:, 1], data[:, 2])


def write_trace(path: Path, times: FloatArray, fronts: FloatArray) -> Path:
    return _write_table(path, "t,x_front", (times, fronts))


def read_trace(path: Path) -> tuple[FloatArray, FloatArray]:
    data = _read_table(path)
    return data[:, 0], data[:, 1]


def write_snapshots(path: Path, rows: FloatArray) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(path, rows.reshape(-1, 4), delimiter=",", fmt=FLOAT_FORMAT, header="t,x,u,v", comments="")
    return path


def _format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return FLOAT_FORMAT % value
    return str(value)


def write_rows(path: Path, rows: list[Mapping[str, Any]], fieldnames: list[str]) -> Path:
    """Flat CSV, one row per mapping, floats at full precision."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(fieldnames)
        for row in rows:
            writer.writerow([_format_cell(row.get(name)) for name in fieldnames])
    return path


@dataclass
class RunManifest:
    """
    Record of one command-line run.

    Every listed artifact is relative to ``output_directory``; a stage whose
    artifacts are missing on disk is marked ``incomplete`` when written.
    """

    command: str
    params: Mapping[str, float]
    output_directory: Path
    speed: float | None = None
    grid: dict[str, float] = field(default_factory=dict)
    stages: dict[str, StageDict] = field(default_factory=dict)

    def add_stage(self, name: str, status: str, artifacts: Iterable[Path] = ()) -> None:
        self.stages[name] = {
            "status": status,
            "artifacts": sorted(
                str(Path(path).relative_to(self.output_directory)) for path in artifacts
            ),
        }

    def as_dict(self) -> ManifestDict:
        return {
            "command": self.command,
            "params": {"a1": self.params["a1"], "a2": self.params["a2"], "r": self.params["r"]},
            "speed": self.speed,
            "grid": self.grid,
            "deterministic": True,
            "output_directory": str(self.output_directory),
            "stages": self.stages,
        }

    def write(self, format: str = "json") -> Path:
        for name, stage in self.stages.items():
            missing = [a for a in stage["artifacts"] if not (self.output_directory / a).exists()]
            if missing:
                logger.warning("Stage %s is missing artifacts %s", name, missing)
                stage["status"] = "incomplete"
        return write_report(self.output_directory / "manifest", self.as_dict(), format)
