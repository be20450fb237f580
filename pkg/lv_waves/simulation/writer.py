"""Async consumer that records field snapshots handed off by a simulation."""

import logging
from pathlib import Path
from typing import Any, cast

import numpy as np

from lv_waves.layers import BaseSnapshotLayer
from lv_waves.reports import write_snapshots
from lv_waves.type_defs import FloatArray, SnapshotMessage

logger = logging.getLogger(__name__)


def get_handler_name(message: SnapshotMessage) -> str:
    """
    Looks at a message, checks it has a sensible type, and returns the
    handler name for that type.

    Raises:
        ValueError: If message has no 'type' attribute or type starts with underscore.
    """
    if "type" not in message:
        raise ValueError("Incoming message has no 'type' attribute")
    handler_name = cast(str, message["type"].replace(".", "_"))
    if handler_name.startswith("_"):
        raise ValueError("Malformed type in message (leading underscore)")
    return handler_name


class SnapshotWriter:
    """
    Receives snapshot messages from a layer channel and routes them to
    methods named after their type until the simulation completes.

    Rows ``(t, x, u, v)`` are collected in memory and written as CSV to
    ``path`` on completion when a path is given.
    """

    def __init__(self, layer: BaseSnapshotLayer, channel: str, path: Path | None = None):
        self.layer = layer
        self.channel = channel
        self.path = path
        self.blocks: list[FloatArray] = []
        self.times: list[float] = []
        self.done = False

    async def run(self) -> None:
        while not self.done:
            await self.dispatch(await self.layer.receive(self.channel))

    async def dispatch(self, message: SnapshotMessage) -> None:
        """
        Works out what to do with a message.

        Raises:
            ValueError: If no handler exists for the message type.
        """
        handler = getattr(self, get_handler_name(message), None)
        if handler:
            await handler(message)
        else:
            raise ValueError("No handler for message type {}".format(message["type"]))

    async def snapshot_fields(self, message: SnapshotMessage) -> None:
        x = np.asarray(message["x"], dtype=np.float64)
        t = float(message["t"])
        self.times.append(t)
        self.blocks.append(
            np.column_stack([np.full_like(x, t), x, message["u"], message["v"]])
        )

    async def simulation_complete(self, message: SnapshotMessage) -> None:
        self.done = True
        if self.path is not None:
            write_snapshots(self.path, self.rows())
            logger.info("Wrote %d snapshots to %s", len(self.times), self.path)

    def rows(self) -> FloatArray:
        if not self.blocks:
            return np.empty((0, 4))
        return np.vstack(self.blocks)

    def summary(self) -> dict[str, Any]:
        return {"snapshots": len(self.times), "times": list(self.times)}
