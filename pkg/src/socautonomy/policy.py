"""Triadic autonomy / human-in-the-loop / trust model.

Trust is a convex combination of explainability, performance history and
(one minus) uncertainty. Autonomy is one minus a complexity/risk penalty
scaled by distrust, and human involvement is its complement. Scores are
then banded into five autonomy levels, each mapped to an oversight mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import TYPE_CHECKING

from .errors import DomainError, WeightError

if TYPE_CHECKING:
    from .catalog import TaskProfile

ALPHA_SUM_TOL = 1e-9


class AutonomyLevel(IntEnum):
    """Five-step autonomy scale, manual (L0) to fully autonomous (L4)."""

    L0 = 0
    L1 = 1
    L2 = 2
    L3 = 3
    L4 = 4


class HitlMode(IntEnum):
    """Oversight modes, ordered from most to least human control."""

    MANUAL = 0
    FULL_HITL = 1
    PARTIAL_HITL = 2
    HOTL = 3
    HOOTL = 4

    @property
    def label(self) -> str:
        return _MODE_LABELS[self]


_MODE_LABELS = {
    HitlMode.MANUAL: "Manual",
    HitlMode.FULL_HITL: "FullHITL",
    HitlMode.PARTIAL_HITL: "PartialHITL",
    HitlMode.HOTL: "HOTL",
    HitlMode.HOOTL: "HOoTL",
}


class TrustBand(IntEnum):
    LOW = 0
    MEDIUM = 1
    HIGH = 2

    @classmethod
    def parse(cls, value: str | TrustBand) -> TrustBand:
        if isinstance(value, TrustBand):
            return value
        try:
            return cls[str(value).upper()]
        except KeyError:
            raise DomainError(f"unknown trust band {value!r}") from None

    @property
    def label(self) -> str:
        return self.name.capitalize()


# Lower edges of L1..L4. Intervals are half-open [lo, hi) and L4 is closed
# at 1.0; the unassigned gaps (0, 0.2), (0.6, 0.7), (0.8, 0.9) fall to the
# lower adjacent level.
LEVEL_LOWER_EDGES = (0.2, 0.4, 0.7, 0.9)

TRUST_MEDIUM_AT = 0.4
TRUST_HIGH_AT = 0.7

_LEVEL_TO_MODE = {
    AutonomyLevel.L0: HitlMode.MANUAL,
    AutonomyLevel.L1: HitlMode.FULL_HITL,
    AutonomyLevel.L2: HitlMode.PARTIAL_HITL,
    AutonomyLevel.L3: HitlMode.HOTL,
    AutonomyLevel.L4: HitlMode.HOOTL,
}


def check_unit(value: float, name: str) -> float:
    """Return ``value`` as float, raising :class:`DomainError` unless in [0, 1]."""
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a number, got {value!r}") from None
    if math.isnan(v) or v < 0.0 or v > 1.0:
        raise DomainError(f"{name}={value!r} outside [0, 1]")
    return v


@dataclass(frozen=True)
class WeightConfig:
    """Weights for the autonomy penalty (lambdas) and the trust blend (alphas)."""

    lambda1: float = 0.5
    lambda2: float = 0.5
    alpha1: float = 0.3
    alpha2: float = 0.5
    alpha3: float = 0.2

    def __post_init__(self) -> None:
        for name in ("lambda1", "lambda2", "alpha1", "alpha2", "alpha3"):
            try:
                check_unit(getattr(self, name), name)
            except DomainError as exc:
                raise WeightError(str(exc)) from None
        total = self.alpha1 + self.alpha2 + self.alpha3
        if abs(total - 1.0) > ALPHA_SUM_TOL:
            raise WeightError(f"alpha weights sum to {total!r}, expected 1")

    @classmethod
    def from_dict(cls, data: dict | None) -> WeightConfig:
        data = dict(data or {})
        unknown = set(data) - {"lambda1", "lambda2", "alpha1", "alpha2", "alpha3"}
        if unknown:
            raise WeightError(f"unknown weight keys: {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in data.items()})

    def to_dict(self) -> dict[str, float]:
        return {
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
            "alpha1": self.alpha1,
            "alpha2": self.alpha2,
            "alpha3": self.alpha3,
        }


@dataclass(frozen=True)
class TrustState:
    explainability: float
    performance_history: float
    uncertainty: float

    def __post_init__(self) -> None:
        check_unit(self.explainability, "explainability")
        check_unit(self.performance_history, "performance_history")
        check_unit(self.uncertainty, "uncertainty")


@dataclass(frozen=True)
class TriadicDecision:
    trust: float
    autonomy: float
    hitl: float
    level: AutonomyLevel
    mode: HitlMode
    trust_band: TrustBand
    delegation_allowed: bool

    def capped(self, cap: AutonomyLevel | None) -> TriadicDecision:
        """Return a copy whose level (and mode) never exceeds ``cap``.

        The scores are left untouched; only the operating level is limited.
        """
        if cap is None or self.level <= cap:
            return self
        return TriadicDecision(
            trust=self.trust,
            autonomy=self.autonomy,
            hitl=self.hitl,
            level=cap,
            mode=hitl_mode_for(cap),
            trust_band=self.trust_band,
            delegation_allowed=self.delegation_allowed,
        )

    @property
    def operating_level(self) -> AutonomyLevel:
        """Level at which the AI may act: refused delegation limits it to L1."""
        if self.delegation_allowed:
            return self.level
        return min(self.level, AutonomyLevel.L1)


class Diagnostics:
    """Counts clamping events; pass one in to observe out-of-range penalties."""

    def __init__(self) -> None:
        self.clamped = 0


def compute_trust(state: TrustState, w: WeightConfig) -> float:
    e = check_unit(state.explainability, "explainability")
    p = check_unit(state.performance_history, "performance_history")
    u = check_unit(state.uncertainty, "uncertainty")
    if abs(w.alpha1 + w.alpha2 + w.alpha3 - 1.0) > ALPHA_SUM_TOL:
        raise WeightError("alpha weights must sum to 1")
    t = w.alpha1 * e + w.alpha2 * p + w.alpha3 * (1.0 - u)
    # Guards against the last-ulp overshoot of a sum of three products.
    return min(1.0, max(0.0, t))


def compute_autonomy(
    complexity: float,
    risk: float,
    trust: float,
    w: WeightConfig,
    diagnostics: Diagnostics | None = None,
) -> float:
    """Autonomy after the complexity/risk penalty, clamped to [0, 1].

    With ``lambda1 + lambda2 > 1`` the raw value can go negative; it is
    clamped and, if ``diagnostics`` is given, counted. A task with zero
    complexity and risk gets full autonomy even at zero trust.
    """
    c = check_unit(complexity, "complexity")
    r = check_unit(risk, "risk")
    t = check_unit(trust, "trust")
    a = 1.0 - (w.lambda1 * c + w.lambda2 * r) * (1.0 - t)
    if a < 0.0:
        if diagnostics is not None:
            diagnostics.clamped += 1
        return 0.0
    return min(a, 1.0)


def compute_hitl(autonomy: float) -> float:
    return 1.0 - check_unit(autonomy, "autonomy")


def band_autonomy(autonomy: float) -> AutonomyLevel:
    a = check_unit(autonomy, "autonomy")
    level = 0
    for edge in LEVEL_LOWER_EDGES:
        if a >= edge:
            level += 1
    return AutonomyLevel(level)


def hitl_mode_for(level: AutonomyLevel) -> HitlMode:
    return _LEVEL_TO_MODE[AutonomyLevel(level)]


def trust_band(trust: float) -> TrustBand:
    t = check_unit(trust, "trust")
    if t < TRUST_MEDIUM_AT:
        return TrustBand.LOW
    if t < TRUST_HIGH_AT:
        return TrustBand.MEDIUM
    return TrustBand.HIGH


def decide(
    complexity: float,
    risk: float,
    trust: float,
    w: WeightConfig,
    required_trust: TrustBand = TrustBand.LOW,
    delegable: bool = True,
    diagnostics: Diagnostics | None = None,
) -> TriadicDecision:
    """Build a decision from raw scores and an already-computed trust value."""
    a = compute_autonomy(complexity, risk, trust, w, diagnostics)
    level = band_autonomy(a)
    band = trust_band(trust)
    return TriadicDecision(
        trust=trust,
        autonomy=a,
        hitl=compute_hitl(a),
        level=level,
        mode=hitl_mode_for(level),
        trust_band=band,
        delegation_allowed=delegable and band >= required_trust,
    )


def triadic_decision(
    task: TaskProfile,
    state: TrustState,
    w: WeightConfig,
    diagnostics: Diagnostics | None = None,
) -> TriadicDecision:
    """Full decision for one task instance given the agent's trust state."""
    t = compute_trust(state, w)
    return decide(
        task.complexity,
        task.risk,
        t,
        w,
        required_trust=task.required_trust,
        delegable=task.delegable,
        diagnostics=diagnostics,
    )
