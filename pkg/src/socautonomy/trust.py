"""Outcome-driven trust ledgers.

Each (agent, task class) pair keeps its own explainability / performance /
uncertainty triple. Performance and uncertainty are exponentially weighted
moving averages of, respectively, correctness and calibration error of the
agent's claimed confidence. Explainability is a static property of the agent.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Sequence

from .errors import DomainError, EmptyHistoryError
from .policy import TrustState, WeightConfig, check_unit, compute_trust

DEFAULT_EWMA_RATE = 0.1


class OutcomeKind(Enum):
    CORRECT_ACTION = "CorrectAction"
    INCORRECT_ACTION = "IncorrectAction"
    HUMAN_OVERRIDE = "HumanOverride"
    ESCALATED_CORRECTLY = "EscalatedCorrectly"
    MISSED_THREAT = "MissedThreat"


_IMPLIED_CORRECT = {
    OutcomeKind.CORRECT_ACTION: True,
    OutcomeKind.ESCALATED_CORRECTLY: True,
    OutcomeKind.INCORRECT_ACTION: False,
    OutcomeKind.MISSED_THREAT: False,
    OutcomeKind.HUMAN_OVERRIDE: False,
}


@dataclass(frozen=True)
class Outcome:
    kind: OutcomeKind
    confidence_claimed: float
    was_correct: bool | None = None

    def __post_init__(self) -> None:
        check_unit(self.confidence_claimed, "confidence_claimed")
        implied = _IMPLIED_CORRECT[self.kind]
        if self.was_correct is None:
            object.__setattr__(self, "was_correct", implied)
        elif self.kind is not OutcomeKind.HUMAN_OVERRIDE and bool(self.was_correct) != implied:
            raise DomainError(f"{self.kind.value} implies was_correct={implied}")

    @property
    def counts_as_correct(self) -> bool:
        # An analyst reversal is always an AI failure.
        if self.kind is OutcomeKind.HUMAN_OVERRIDE:
            return False
        return bool(self.was_correct)


@dataclass(frozen=True)
class TrustLedger:
    agent_id: str
    class_id: str
    state: TrustState
    interaction_count: int = 0
    ewma_rate: float = DEFAULT_EWMA_RATE

    def __post_init__(self) -> None:
        if not 0.0 < self.ewma_rate <= 1.0:
            raise DomainError(f"ewma_rate={self.ewma_rate!r} outside (0, 1]")
        if self.interaction_count < 0:
            raise DomainError("interaction_count must be non-negative")

    @classmethod
    def fresh(
        cls,
        agent_id: str,
        class_id: str,
        explainability: float = 0.5,
        performance_history: float = 0.5,
        uncertainty: float = 0.5,
        ewma_rate: float = DEFAULT_EWMA_RATE,
    ) -> TrustLedger:
        return cls(
            agent_id,
            class_id,
            TrustState(explainability, performance_history, uncertainty),
            0,
            ewma_rate,
        )

    def to_dict(self) -> dict:
        return {
            "agent_id": self.agent_id,
            "class_id": self.class_id,
            "E": self.state.explainability,
            "P": self.state.performance_history,
            "U": self.state.uncertainty,
            "n": self.interaction_count,
        }


def _clip(x: float) -> float:
    return 0.0 if x < 0.0 else 1.0 if x > 1.0 else x


def record_outcome(ledger: TrustLedger, outcome: Outcome) -> TrustLedger:
    b = ledger.ewma_rate
    target = 1.0 if outcome.counts_as_correct else 0.0
    s = ledger.state
    p = _clip((1.0 - b) * s.performance_history + b * target)
    u = _clip((1.0 - b) * s.uncertainty + b * abs(outcome.confidence_claimed - target))
    return replace(
        ledger,
        state=TrustState(s.explainability, p, u),
        interaction_count=ledger.interaction_count + 1,
    )


def current_trust(ledger: TrustLedger, w: WeightConfig) -> float:
    return compute_trust(ledger.state, w)


def trust_trajectory(ledger_history: Sequence[TrustLedger], w: WeightConfig) -> list[float]:
    if not ledger_history:
        raise EmptyHistoryError("trust trajectory needs at least one ledger snapshot")
    return [current_trust(led, w) for led in ledger_history]
