"""In-memory snapshot layer implementation.

Messages are kept in per-channel asyncio queues owned by one event loop.
``send_nowait`` may be called from a worker thread: the item is handed to
the owning loop with ``call_soon_threadsafe`` while capacity is accounted
for under a lock, so a full channel is reported to the sender at once.
"""

import asyncio
import random
import string
import threading
from copy import deepcopy

from lv_waves.exceptions import ChannelFull
from lv_waves.type_defs import SnapshotMessage

from .base import BaseSnapshotLayer


class InMemorySnapshotLayer(BaseSnapshotLayer):
    """
    In-memory snapshot layer implementation
    """

    retry_interval: float = 0.01

    def __init__(self, capacity: int = 64):
        super().__init__(capacity=capacity)
        self.channels: dict[str, asyncio.Queue[SnapshotMessage]] = {}
        self.pending: dict[str, int] = {}
        self._lock = threading.Lock()
        self._loop: asyncio.AbstractEventLoop | None = None

    def bind_loop(self, loop: asyncio.AbstractEventLoop | None = None) -> None:
        """
        Attach the event loop that owns the queues. Defaults to the running
        loop.
        """
        self._loop = loop or asyncio.get_running_loop()

    def _queue(self, channel: str) -> asyncio.Queue[SnapshotMessage]:
        return self.channels.setdefault(channel, asyncio.Queue())

    def _reserve(self, channel: str) -> None:
        with self._lock:
            count = self.pending.get(channel, 0)
            if count >= self.capacity:
                raise ChannelFull(channel)
            self.pending[channel] = count + 1

    def send_nowait(self, channel: str, message: SnapshotMessage) -> None:
        """
        Put a copy of ``message`` on ``channel`` without blocking.

        Raises:
            ChannelFull: If the channel already holds ``capacity`` messages.
        """
        assert isinstance(message, dict), "message is not a dict"
        self.require_valid_channel_name(channel)
        self._reserve(channel)
        item = deepcopy(message)
        loop = self._loop
        if loop is None or not loop.is_running() or _in_loop_thread(loop):
            self._queue(channel).put_nowait(item)
        else:
            loop.call_soon_threadsafe(lambda: self._queue(channel).put_nowait(item))

    async def send(self, channel: str, message: SnapshotMessage) -> None:
        """
        Send ``message``, waiting for room on the channel instead of
        raising ChannelFull.
        """
        while True:
            try:
                self.send_nowait(channel, message)
                return
            except ChannelFull:
                await asyncio.sleep(self.retry_interval)

    async def receive(self, channel: str) -> SnapshotMessage:
        """
        Receive the first message that arrives on the channel.
        """
        self.require_valid_channel_name(channel)
        message = await self._queue(channel).get()
        with self._lock:
            self.pending[channel] -= 1
        return message

    async def new_channel(self, prefix: str = "snapshots") -> str:
        return "{}.inmemory!{}".format(
            prefix,
            "".join(random.choice(string.ascii_letters) for _ in range(12)),
        )

    def discard(self, channel: str) -> None:
        """Drop the queue and pending count of ``channel``."""
        with self._lock:
            self.channels.pop(channel, None)
            self.pending.pop(channel, None)


def _in_loop_thread(loop: asyncio.AbstractEventLoop) -> bool:
    try:
        return asyncio.get_running_loop() is loop
    except RuntimeError:
        return False
