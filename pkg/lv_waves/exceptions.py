"""Custom exceptions for lv-waves.

This module defines every exception raised by the wave construction,
fitting, simulation and verification code. ``LVWaveError`` subclasses are
mathematical failures (exit code 1 on the command line); ``ConfigError`` is a
usage error (exit code 2).
"""

from typing import Any


class LVWaveError(Exception):
    """
    Base class for mathematical failures.
    """

    pass


class ValidationError(LVWaveError, ValueError):
    """
    Raised when parameters, grids or options fail validation.
    """

    pass


class GridError(ValidationError):
    """
    Raised when a grid is malformed or incompatible with a wave speed.
    """

    pass


class HypothesisError(ValidationError):
    """
    Raised when a construction needs hypotheses H1-H3 and they do not hold.
    """

    pass


class BelowMinimalSpeed(LVWaveError):
    """
    Raised when a monotone front is requested below the minimal speed.

    The subcritical diagnostic, when one was computed, is attached as
    ``diagnostic``.
    """

    def __init__(self, message: str, diagnostic: Any = None):
        super().__init__(message)
        self.diagnostic = diagnostic


class NotSubcritical(ValidationError):
    """
    Raised when the subcritical diagnostic is requested at c >= c*.
    """

    pass


class ConvergenceError(LVWaveError):
    """
    Raised when Newton or the monotone iteration fails to converge.

    The partial trace is attached as ``trace``.
    """

    def __init__(self, message: str, trace: Any = None):
        super().__init__(message)
        self.trace = trace


class QuasimonotonicityBroken(ConvergenceError):
    """
    Raised when an iterate leaves the upper/lower sandwich.
    """

    pass


class OrderingError(LVWaveError):
    """
    Raised when two profiles cannot be ordered.
    """

    pass


class FitWindowError(LVWaveError):
    """
    Raised when a decay fit window has nonpositive or too few samples.
    """

    pass


class CrossingNotFound(LVWaveError):
    """
    Raised when a profile never crosses a requested level.
    """

    pass


class SimulationBlowUp(LVWaveError):
    """
    Raised when the parabolic fields stop being finite.
    """

    def __init__(self, message: str, last_valid_time: float):
        super().__init__(message)
        self.last_valid_time = last_valid_time


class DomainTooShort(LVWaveError):
    """
    Raised when the tracked front reaches the edge of the simulation domain.
    """

    pass


class ChannelFull(Exception):
    """
    Raised when a snapshot channel cannot be sent to as it is over capacity.
    """

    pass


class ConfigError(ValueError):
    """
    Raised when a config file or flag value cannot be parsed.
    """

    pass


class SerializerDoesNotExist(KeyError):
    """
    Raised when a report format has no registered serializer.
    """

    pass
