"""Base snapshot layer implementation.

This module provides the abstract base class for snapshot layers, the
bounded hand-off between a running simulation and whoever records its
fields, with channel name validation.
"""

import re

from lv_waves.type_defs import SnapshotMessage


class BaseSnapshotLayer:
    """
    Base snapshot layer class that others can inherit from. Every channel
    holds at most ``capacity`` undelivered messages.
    """

    MAX_NAME_LENGTH: int = 100
    capacity: int

    def __init__(self, capacity: int = 64):
        """Initialize the base snapshot layer.

        Args:
            capacity: Channel capacity (default: 64).
        """
        if capacity < 1:
            raise ValueError(f"capacity must be at least 1, got {capacity}")
        self.capacity = capacity

    channel_name_regex = re.compile(r"^[a-zA-Z\d\-_.]+(\![\d\w\-_.]*)?$")
    invalid_name_error = (
        "Channel name must be a valid unicode string "
        + f"with length < {MAX_NAME_LENGTH} "
        + "containing only ASCII alphanumerics, hyphens, underscores, or periods."
    )

    def require_valid_channel_name(self, name: str) -> bool:
        """Validate a channel name.

        Raises:
            TypeError: If the channel name is invalid.
        """
        if not isinstance(name, str) or len(name) >= self.MAX_NAME_LENGTH:
            raise TypeError(self.invalid_name_error)
        if not self.channel_name_regex.match(name):
            raise TypeError(self.invalid_name_error)
        return True

    def send_nowait(self, channel: str, message: SnapshotMessage) -> None:
        """Hand a message to a channel without blocking.

        Raises:
            ChannelFull: If the channel is at capacity.
            NotImplementedError: Must be implemented by subclasses.
        """
        raise NotImplementedError("send_nowait() should be implemented in a snapshot layer")

    async def send(self, channel: str, message: SnapshotMessage) -> None:
        """Send a message to a channel.

        Raises:
            NotImplementedError: Must be implemented by subclasses.
        """
        raise NotImplementedError("send() should be implemented in a snapshot layer")

    async def receive(self, channel: str) -> SnapshotMessage:
        """Receive the next message from a channel.

        Raises:
            NotImplementedError: Must be implemented by subclasses.
        """
        raise NotImplementedError("receive() should be implemented in a snapshot layer")

    async def new_channel(self, prefix: str = "snapshots") -> str:
        """Generate a new unique channel name.

        Raises:
            NotImplementedError: Must be implemented by subclasses.
        """
        raise NotImplementedError("new_channel() should be implemented in a snapshot layer")

    def discard(self, channel: str) -> None:
        """Forget a finished channel and anything still queued on it."""
        raise NotImplementedError("discard() should be implemented in a snapshot layer")
