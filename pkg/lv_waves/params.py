"""Model parameters, hypotheses and closed-form constants.

The competition system is studied in transformed variables where
``v = 1 - v_hat``. In those variables the reaction terms are

    F1(u, v) = u (1 - a1 - u + a1 v)
    F2(u, v) = r (1 - v) (a2 u - v)

with equilibria (0, 0) and (1, 1), and the system is cooperative on the
box [0, 1]^2.
"""

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import BelowMinimalSpeed, ValidationError
from .type_defs import (
    Branch,
    ExponentSetDict,
    FloatArray,
    HypothesisReportDict,
    ParamsDict,
    Regime,
)

CRITICAL_RTOL = 1e-10


@dataclass(frozen=True)
class ModelParams:
    """
    Immutable (a1, a2, r) triple.

    Construction only checks that the fields are finite; H1-H3 are reported
    by :func:`validate_hypotheses` and enforced by the operations that need
    them.
    """

    a1: float
    a2: float
    r: float

    def __post_init__(self) -> None:
        for name in ("a1", "a2", "r"):
            value = getattr(self, name)
            if not isinstance(value, int | float) or not math.isfinite(value):
                raise ValidationError(f"parameter {name} must be a finite real, got {value!r}")

    @property
    def alpha(self) -> float:
        """Linear growth rate 1 - a1 of u at the zero equilibrium."""
        return 1.0 - self.a1

    @property
    def coupling(self) -> float:
        """The product r (a2 - 1) that splits the decay branches."""
        return self.r * (self.a2 - 1.0)

    @property
    def tail_ratio(self) -> float:
        """Ratio v/u along every decaying mode at -infinity."""
        return self.r * self.a2 / (1.0 - self.a1 + self.r)

    def as_dict(self) -> ParamsDict:
        return {"a1": self.a1, "a2": self.a2, "r": self.r}

    def reaction(self, u: FloatArray, v: FloatArray) -> tuple[FloatArray, FloatArray]:
        """Transformed reaction terms (F1, F2)."""
        f1 = u * (1.0 - self.a1 - u + self.a1 * v)
        f2 = self.r * (1.0 - v) * (self.a2 * u - v)
        return f1, f2

    def jacobian(
        self, u: FloatArray, v: FloatArray
    ) -> tuple[FloatArray, FloatArray, FloatArray, FloatArray]:
        """
        Partial derivatives (A11, A12, A21, A22) of the transformed reaction.

        A12 and A21 are the off-diagonal partials; they are nonnegative on
        the box, which is what makes the transformed system cooperative.
        """
        a11 = 1.0 - self.a1 - 2.0 * u + self.a1 * v
        a12 = self.a1 * u
        a21 = self.a2 * self.r * (1.0 - v)
        a22 = -self.r * (self.a2 * u + 1.0 - 2.0 * v)
        return a11, a12, a21, a22

    def original_reaction(
        self, u: FloatArray, v_hat: FloatArray
    ) -> tuple[FloatArray, FloatArray]:
        """Reaction terms of the untransformed competition system."""
        fu = u * (1.0 - u - self.a1 * v_hat)
        fv = self.r * v_hat * (1.0 - self.a2 * u - v_hat)
        return fu, fv


@dataclass(frozen=True)
class HypothesisReport:
    """
    Pass/fail flags of H1-H3 with signed margins.

    ``margins`` holds the H1 slack min(1 - a1, a2 - 1, r) (folded with a1
    itself when a1 <= 0), then the literal slacks r(a2-1) - (1-a1) and
    (1-a1)(2-a1+r) - r(a2-1).
    """

    h1: bool
    h2: bool
    h3: bool
    margins: tuple[float, float, float]

    @property
    def all_pass(self) -> bool:
        return self.h1 and self.h2 and self.h3

    def as_dict(self) -> HypothesisReportDict:
        return {
            "h1": self.h1,
            "h2": self.h2,
            "h3": self.h3,
            "margins": list(self.margins),
            "all_pass": self.all_pass,
        }


@dataclass(frozen=True)
class SpeedSpec:
    """A wave speed and its regime relative to c*."""

    c: float
    regime: Regime


@dataclass(frozen=True)
class ExponentSet:
    """Predicted tail exponents of the traveling wave."""

    lambda_minus: float
    mu_u_plus: float
    mu_v_plus: float
    branch: Branch
    critical_polynomial: bool

    def as_dict(self) -> ExponentSetDict:
        return {
            "lambda_minus": self.lambda_minus,
            "mu_u_plus": self.mu_u_plus,
            "mu_v_plus": self.mu_v_plus,
            "branch": self.branch,
            "critical_polynomial": self.critical_polynomial,
        }


def validate_hypotheses(p: ModelParams) -> HypothesisReport:
    """
    Evaluate H1-H3.

    H1 and H3 are strict, H2 is not: a zero margin passes H2 and fails
    H1 or H3.
    """
    h1_margin = min(1.0 - p.a1, p.a2 - 1.0, p.r)
    if p.a1 <= 0:
        h1_margin = min(h1_margin, p.a1)
    h2_margin = p.coupling - p.alpha
    h3_margin = p.alpha * (2.0 - p.a1 + p.r) - p.coupling
    return HypothesisReport(
        h1=h1_margin > 0,
        h2=h2_margin >= 0,
        h3=h3_margin > 0,
        margins=(h1_margin, h2_margin, h3_margin),
    )


def require_h1(p: ModelParams) -> None:
    if not validate_hypotheses(p).h1:
        raise ValidationError(
            f"H1 requires 0 < a1 < 1 < a2 and r > 0; got a1={p.a1}, a2={p.a2}, r={p.r}"
        )


def minimal_speed(p: ModelParams) -> float:
    """Return c* = 2 sqrt(1 - a1)."""
    require_h1(p)
    return 2.0 * math.sqrt(p.alpha)


def is_critical(c: float, c_star: float) -> bool:
    return abs(c - c_star) <= CRITICAL_RTOL * max(1.0, c_star)


def classify_speed(p: ModelParams, c: float) -> SpeedSpec:
    """Attach the regime of ``c`` with respect to c*."""
    if not math.isfinite(c) or c <= 0:
        raise ValidationError(f"wave speed must be a positive finite real, got {c!r}")
    c_star = minimal_speed(p)
    if is_critical(c, c_star):
        return SpeedSpec(c=c, regime="critical")
    return SpeedSpec(c=c, regime="supercritical" if c > c_star else "subcritical")


def decay_branch(p: ModelParams) -> Branch:
    return "small" if p.coupling <= 1.0 else "large"


def predicted_exponents(p: ModelParams, s: SpeedSpec) -> ExponentSet:
    """
    Closed-form tail exponents for a wave of speed ``s.c``.

    At critical speed the -infinity tail carries a linear polynomial factor
    and the square roots are evaluated at c = c* exactly.

    Raises:
        ValidationError: If H1-H3 do not hold.
        BelowMinimalSpeed: If the speed is subcritical.
    """
    report = validate_hypotheses(p)
    if not report.all_pass:
        raise ValidationError(f"hypotheses H1-H3 do not hold: {report.as_dict()}")
    if s.regime == "subcritical":
        raise BelowMinimalSpeed("no monotone wave below c*")
    c = s.c
    branch = decay_branch(p)
    if s.regime == "critical":
        lambda_minus = math.sqrt(p.alpha)
        mu_v = math.sqrt(p.alpha + p.coupling) - math.sqrt(p.alpha)
        mu_u_large = math.sqrt(2.0 - p.a1) - math.sqrt(p.alpha)
    else:
        lambda_minus = (c - math.sqrt(c * c - 4.0 * p.alpha)) / 2.0
        mu_v = (math.sqrt(c * c + 4.0 * p.coupling) - c) / 2.0
        mu_u_large = (math.sqrt(c * c + 4.0) - c) / 2.0
    return ExponentSet(
        lambda_minus=lambda_minus,
        mu_u_plus=mu_v if branch == "small" else mu_u_large,
        mu_v_plus=mu_v,
        branch=branch,
        critical_polynomial=s.regime == "critical",
    )


def iteration_beta(p: ModelParams) -> float:
    """
    Smallest penalization constant making the iteration map monotone.

    On [0, 1]^2 the diagonal partials satisfy dF1/du >= -(1 + a1) and
    dF2/dv >= -r (a2 + 1).
    """
    return max(1.0 + p.a1, p.r * (p.a2 + 1.0))


def to_original(v: FloatArray) -> FloatArray:
    """Map the transformed second component back to v_hat = 1 - v."""
    return np.asarray(1.0 - v, dtype=np.float64)

