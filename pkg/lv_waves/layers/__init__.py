from .base import BaseSnapshotLayer
from .in_memory import InMemorySnapshotLayer
from .registry import (
    SnapshotLayerRegistry,
    get_snapshot_layer,
    register_snapshot_layer,
    snapshot_layers,
)

__all__ = [
    "BaseSnapshotLayer",
    "InMemorySnapshotLayer",
    "SnapshotLayerRegistry",
    "get_snapshot_layer",
    "register_snapshot_layer",
    "snapshot_layers",
]
