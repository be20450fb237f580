"""
Snapshot layer management and configuration
"""

from .base import BaseSnapshotLayer


class SnapshotLayerRegistry:
    """
    Registry pattern for managing snapshot layers.
    Allows direct registration of snapshot layer instances.
    """

    def __init__(self) -> None:
        self._layers: dict[str, BaseSnapshotLayer] = {}

    def register(self, alias: str, layer: BaseSnapshotLayer) -> None:
        """
        Register a snapshot layer instance with an alias, replacing any
        layer already registered under it.
        """
        self._layers[alias] = layer

    def get(self, alias: str) -> BaseSnapshotLayer | None:
        return self._layers.get(alias)


# Default global instance of the snapshot layer registry
snapshot_layers = SnapshotLayerRegistry()


def get_snapshot_layer(alias: str) -> BaseSnapshotLayer | None:
    """
    Returns a snapshot layer by alias.
    """
    return snapshot_layers.get(alias)


def register_snapshot_layer(alias: str, layer: BaseSnapshotLayer) -> None:
    """
    Register a snapshot layer instance.

    Example:
        register_snapshot_layer("snapshots", InMemorySnapshotLayer(capacity=16))
    """
    snapshot_layers.register(alias, layer)
