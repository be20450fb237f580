"""Type definitions for lv-waves.

This module contains the array aliases, literal enums and the TypedDict
schemas of every JSON report the command line writes.
"""

from collections.abc import Mapping
from typing import Any, Literal, TypeAlias, TypedDict

import numpy as np
import numpy.typing as npt

FloatArray: TypeAlias = npt.NDArray[np.float64]
"""One-dimensional array of float64 samples."""

Regime: TypeAlias = Literal["supercritical", "critical", "subcritical"]
"""Position of a wave speed relative to the minimal speed."""

Branch: TypeAlias = Literal["small", "large"]
"""Decay branch at +infinity, split at r(a2-1) = 1."""

End: TypeAlias = Literal["minus_inf", "plus_inf"]
"""Which tail of a profile a fit looks at."""

Component: TypeAlias = Literal["u", "v"]
"""Profile component."""

LeftData: TypeAlias = Literal["tail", "equilibrium"]
"""Dirichlet data used by the monotone iteration at -L."""

InitialKind: TypeAlias = Literal["step", "smoothed_step", "wave"]
"""Initial condition of a parabolic run."""

SnapshotMessage = Mapping[str, Any]
"""Message passed through a snapshot layer; carries a ``type`` key."""


class ParamsDict(TypedDict):
    """Model parameters as written to reports."""

    a1: float
    a2: float
    r: float


class HypothesisReportDict(TypedDict):
    """Serialized hypothesis report."""

    h1: bool
    h2: bool
    h3: bool
    margins: list[float]
    all_pass: bool


class ExponentSetDict(TypedDict):
    """Serialized predicted exponents."""

    lambda_minus: float
    mu_u_plus: float
    mu_v_plus: float
    branch: Branch
    critical_polynomial: bool


class DecayFitDict(TypedDict):
    """Serialized decay fit."""

    end: End
    component: Component
    rate: float
    polynomial_detected: bool
    window: list[float]
    fit_residual: float
    amplitude: float
    log_coefficient: float


class RateComparisonDict(TypedDict):
    """Serialized rate comparison, one per (end, component)."""

    end: End
    component: Component
    predicted: float
    fitted: float
    relative_error: float
    passed: bool
    polynomial_detected: bool


class WaveReportDict(TypedDict):
    """Sidecar report written next to a converged wave profile."""

    params: ParamsDict
    c: float
    regime: Regime
    L: float
    h: float
    l: float
    nu: float
    nu_applied: float
    beta: float
    iterations: int
    final_residuals: list[float]
    comparisons: list[RateComparisonDict]
    cross_check_distance: float | None
    passed: bool


class StageDict(TypedDict):
    """Status of one pipeline stage in a run manifest."""

    status: str
    artifacts: list[str]


class ManifestDict(TypedDict):
    """Run manifest; always the last file written in a run directory."""

    command: str
    params: ParamsDict
    speed: float | None
    grid: dict[str, float]
    deterministic: bool
    output_directory: str
    stages: dict[str, StageDict]
