"""Report serialization.

Reports are plain dicts of builtins encoded to bytes by a serializer looked
up by format name. JSON is always available; MessagePack is registered when
the optional ``msgpack`` extra is installed.
"""

import abc
import json
from typing import Any

from .exceptions import SerializerDoesNotExist


class BaseReportSerializer(abc.ABC):
    """Abstract base class for report serializers."""

    extension: str = ""

    @abc.abstractmethod
    def as_bytes(self, report: Any) -> bytes:
        """Convert a report to bytes."""
        raise NotImplementedError

    @abc.abstractmethod
    def from_bytes(self, data: bytes) -> Any:
        """Convert bytes back to a report."""
        raise NotImplementedError

    def serialize(self, report: Any) -> bytes:
        return self.as_bytes(report)

    def deserialize(self, data: bytes) -> Any:
        return self.from_bytes(data)


class MissingSerializer(BaseReportSerializer):
    """
    Placeholder for a format whose package is missing. Instantiating it
    raises the import error recorded in ``exception``.
    """

    exception: Exception | None = None

    def __init__(self) -> None:
        raise self.exception or ImportError(f"{type(self).__name__} needs an optional package")

    def as_bytes(self, report: Any) -> bytes:
        raise NotImplementedError

    def from_bytes(self, data: bytes) -> Any:
        raise NotImplementedError


class JSONSerializer(BaseReportSerializer):
    """
    Stable JSON: sorted keys, two-space indent, trailing newline, UTF-8.

    Non-finite floats are rejected; reports replace them with null first.
    """

    extension = ".json"

    def as_bytes(self, report: Any) -> bytes:
        text = json.dumps(report, sort_keys=True, indent=2, allow_nan=False)
        return (text + "\n").encode("utf-8")

    def from_bytes(self, data: bytes) -> Any:
        return json.loads(data)


try:
    import msgpack  # type: ignore[import-untyped]
except ImportError as exc:

    class MsgPackSerializer(MissingSerializer):
        """MessagePack serializer that raises an exception when msgpack is not available."""

        exception = exc

else:

    class MsgPackSerializer(BaseReportSerializer):  # type: ignore
        """MessagePack serializer using the msgpack library."""

        extension = ".msgpack"

        def as_bytes(self, report: Any) -> bytes:
            return msgpack.packb(report)  # type: ignore

        def from_bytes(self, data: bytes) -> Any:
            return msgpack.unpackb(data)


class SerializersRegistry:
    """Report formats by name."""

    def __init__(self) -> None:
        self._registry: dict[str, type[BaseReportSerializer]] = {}

    def register_serializer(
        self, format: str, serializer_class: type[BaseReportSerializer]
    ) -> None:
        """
        Map ``format`` to a serializer class.

        Raises:
            TypeError: If the class has no ``serialize``/``deserialize`` pair.
        """
        if not isinstance(serializer_class, type) or not all(
            callable(getattr(serializer_class, name, None)) for name in ("serialize", "deserialize")
        ):
            raise TypeError(f"{serializer_class!r} cannot serialize reports")
        self._registry[format] = serializer_class

    def get_serializer(self, format: str) -> BaseReportSerializer:
        """A fresh serializer for ``format``.

        Raises:
            SerializerDoesNotExist: If the format is not registered.
        """
        try:
            serializer_class = self._registry[format]
        except KeyError:
            raise SerializerDoesNotExist(format) from None

        return serializer_class()

    def formats(self) -> list[str]:
        return sorted(self._registry)

    def available(self, format: str) -> bool:
        """Whether ``format`` is registered with its package installed."""
        serializer_class = self._registry.get(format)
        return serializer_class is not None and not issubclass(serializer_class, MissingSerializer)


registry = SerializersRegistry()
registry.register_serializer("json", JSONSerializer)
registry.register_serializer("msgpack", MsgPackSerializer)  # type: ignore[type-abstract]
