"""Utility functions shared across lv-waves.

This module contains the profile helpers used by construction, fitting and
verification (translation, level crossings) and the async helper the sweep
uses to bound concurrency.
"""

import asyncio
from collections.abc import Awaitable, Callable, Sequence
from typing import TypeVar

import numpy as np

from .numerics.grid import WaveProfile
from .type_defs import FloatArray

T = TypeVar("T")


def level_crossing(x: FloatArray, values: FloatArray, level: float) -> float | None:
    """
    Return the first position where ``values`` crosses ``level``, scanning
    left to right, with linear interpolation between the bracketing nodes.

    Args:
        x: Increasing node positions.
        values: Samples at the nodes.
        level: Level to look for.

    Returns:
        The interpolated crossing, or None if the samples never cross.
    """
    above = values >= level
    changes = np.flatnonzero(above[:-1] != above[1:])
    if changes.size == 0:
        return None
    i = int(changes[0])
    v0, v1 = values[i], values[i + 1]
    if v1 == v0:
        return float(x[i])
    return float(x[i] + (level - v0) * (x[i + 1] - x[i]) / (v1 - v0))


def shift_values(
    nodes: FloatArray,
    values: FloatArray,
    amount: float,
    left: float | None = None,
    right: float | None = None,
) -> FloatArray:
    """
    Sample ``w(xi + amount)`` on the same nodes by linear interpolation.

    Positive ``amount`` moves the profile to the left. Outside the grid the
    samples are extended by the boundary values unless ``left``/``right``
    are given.
    """
    return np.asarray(
        np.interp(nodes + amount, nodes, values, left=left, right=right),
        dtype=np.float64,
    )


def shift_profile(profile: WaveProfile, amount: float) -> WaveProfile:
    """Translate a profile: the result samples ``(u, v)(xi + amount)``."""
    nodes = profile.grid.nodes
    return WaveProfile.from_arrays(
        profile.grid,
        shift_values(nodes, profile.u.values, amount),
        shift_values(nodes, profile.v.values, amount),
    )


def shift_nodes(values: FloatArray, k: int) -> FloatArray:
    """
    Exact translation by ``k`` whole nodes to the left, padding the right
    end with the last value.
    """
    if k <= 0:
        return values.copy()
    shifted = np.empty_like(values)
    shifted[: values.size - k] = values[k:]
    shifted[values.size - k :] = values[-1]
    return shifted


def sign_changes(values: FloatArray) -> int:
    """Number of strict sign changes, ignoring exact zeros."""
    signs = np.sign(values[values != 0])
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


async def gather_bounded(
    factories: Sequence[Callable[[], Awaitable[T]]], limit: int
) -> list[T]:
    """
    Await every factory with at most ``limit`` running at once and return
    the results in input order.

    Args:
        factories: Zero-argument callables producing awaitables.
        limit: Maximum number of concurrently running awaitables.

    Returns:
        Results in the same order as ``factories``.
    """
    semaphore = asyncio.Semaphore(max(1, limit))

    async def run(factory: Callable[[], Awaitable[T]]) -> T:
        async with semaphore:
            return await factory()

    return list(await asyncio.gather(*(run(factory) for factory in factories)))
