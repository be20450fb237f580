from .core import SimConfig, SimTrace, simulate
from .speed import SpeedEstimate, TranslationReport, estimate_speed, wave_translation_test
from .writer import SnapshotWriter

__all__ = [
    "SimConfig",
    "SimTrace",
    "SnapshotWriter",
    "SpeedEstimate",
    "TranslationReport",
    "estimate_speed",
    "simulate",
    "wave_translation_test",
]
