"""Run configuration: built-in defaults, a flat config file, then flags.

A config file holds ``key = value`` lines with ``#`` comments and no
section header, for example::

    a1 = 0.5
    a2 = 2
    r = 0.5
    L = 60
"""

import configparser
import math
from collections.abc import Callable, Mapping
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any

from .exceptions import ConfigError
from .params import ModelParams
from .serializers import registry

INIT_KINDS = ("step", "smoothed_step", "wave")


def parse_speeds(text: str) -> tuple[float, ...]:
    """Comma-separated speeds, e.g. ``1.5,2,3``."""
    try:
        return tuple(float(item) for item in text.split(",") if item.strip())
    except ValueError:
        raise ConfigError(f"malformed speed list: {text!r}") from None


def parse_range(text: str) -> tuple[float, ...]:
    """``start:stop:step`` with ``stop`` included when hit exactly."""
    try:
        start, stop, step = (float(item) for item in text.split(":"))
    except ValueError:
        raise ConfigError(f"malformed speed range {text!r}, expected start:stop:step") from None
    if step <= 0 or stop < start:
        raise ConfigError(f"empty speed range: {text!r}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return tuple(round(start + k * step, 12) for k in range(count))


def _optional_float(text: str) -> float | None:
    return None if text.strip().lower() in ("", "none") else float(text)


def _optional_int(text: str) -> int | None:
    return None if text.strip().lower() in ("", "none") else int(text)


CONVERTERS: dict[str, Callable[[str], Any]] = {
    "a1": _optional_float,
    "a2": _optional_float,
    "r": _optional_float,
    "c": _optional_float,
    "L": float,
    "h": float,
    "tol": float,
    "residual_tol": float,
    "jobs": int,
    "out": str,
    "report_format": str,
    "X": float,
    "dx": float,
    "dt": float,
    "T": float,
    "level": float,
    "init": str,
    "burn_in": float,
    "snapshot_every": _optional_int,
    "snapshot_capacity": int,
    "speeds": parse_speeds,
}


@dataclass(frozen=True)
class RunConfig:
    """
    Every setting the command line understands.

    Invalid values raise ConfigError, which the command line reports as a
    usage error.
    """

    a1: float | None = None
    a2: float | None = None
    r: float | None = None
    c: float | None = None
    L: float = 60.0
    h: float = 0.02
    tol: float = 0.03
    residual_tol: float = 1e-6
    jobs: int = 1
    out: str = "runs"
    report_format: str = "json"
    X: float = 400.0
    dx: float = 0.1
    dt: float = 0.1
    T: float = 200.0
    level: float = 0.5
    init: str = "step"
    burn_in: float = 0.5
    snapshot_every: int | None = None
    snapshot_capacity: int = 64
    speeds: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        for name in ("a1", "a2", "r", "c"):
            value = getattr(self, name)
            if value is not None and not math.isfinite(value):
                raise ConfigError(f"{name} must be finite, got {value}")
        for name in ("L", "h", "tol", "residual_tol", "X", "dx", "dt"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise ConfigError(f"{name} must be positive, got {value}")
        if not math.isfinite(self.T) or self.T < 0:
            raise ConfigError(f"T must be nonnegative, got {self.T}")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be at least 1, got {self.jobs}")
        if not 0 < self.level < 1:
            raise ConfigError(f"level must lie in (0, 1), got {self.level}")
        if not 0 <= self.burn_in < 1:
            raise ConfigError(f"burn_in must lie in [0, 1), got {self.burn_in}")
        if self.init not in INIT_KINDS:
            raise ConfigError(f"init must be one of {INIT_KINDS}, got {self.init!r}")
        if self.report_format not in registry.formats():
            raise ConfigError(f"unknown report format {self.report_format!r}")
        if not registry.available(self.report_format):
            raise ConfigError(
                f"report format {self.report_format!r} needs an optional package; "
                f"install lv-waves[{self.report_format}]"
            )
        if self.snapshot_capacity < 1:
            raise ConfigError(f"snapshot_capacity must be positive, got {self.snapshot_capacity}")

    @classmethod
    def from_sources(
        cls, file_values: Mapping[str, Any] | None = None, flags: Mapping[str, Any] | None = None
    ) -> "RunConfig":
        """Defaults, overridden by the config file, overridden by flags that were given."""
        values: dict[str, Any] = {}
        values.update(file_values or {})
        values.update({key: value for key, value in (flags or {}).items() if value is not None})
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**values)

    def params(self) -> ModelParams:
        """
        Raises:
            ConfigError: If a1, a2 or r is missing.
        """
        missing = [name for name in ("a1", "a2", "r") if getattr(self, name) is None]
        if missing:
            raise ConfigError(f"missing model parameters: {', '.join(missing)}")
        assert self.a1 is not None and self.a2 is not None and self.r is not None
        return ModelParams(a1=self.a1, a2=self.a2, r=self.r)

    def require_speed(self) -> float:
        if self.c is None:
            raise ConfigError("this command needs a wave speed --c")
        return self.c

    @property
    def out_dir(self) -> Path:
        return Path(self.out)

    def as_dict(self) -> dict[str, Any]:
        return asdict(self)


def load_config_file(path: Path) -> dict[str, Any]:
    """
    Parse a flat ``key = value`` file into typed values.

    Raises:
        ConfigError: If the file is unreadable, malformed or has unknown keys.
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    parser.optionxform = str  # type: ignore[assignment,method-assign]
    try:
        text = path.read_text()
        parser.read_string("[run]\n" + text, source=str(path))
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    values: dict[str, Any] = {}
    for key, raw in parser["run"].items():
        converter = CONVERTERS.get(key)
        if converter is None:
            raise ConfigError(f"unknown config key {key!r} in {path}")
        try:
            values[key] = converter(raw)
        except ValueError:
            raise ConfigError(f"bad value {raw!r} for {key} in {path}") from None
    return values
