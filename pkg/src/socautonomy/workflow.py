"""Alert / incident workflow state machine with autonomy-gated actions.

One machine covers the three collaborative workflows: alert handling
(ingest, AI triage, human validation, auto-dismissal), threat handling
(ticketing and investigation) and response & recovery (gated containment
actions, restoration, closure). Every state change goes through
:func:`step_workflow`, which only follows edges declared in :data:`EDGES`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from enum import Enum, IntEnum
from typing import Iterable, Sequence

from .catalog import Tier
from .errors import InvalidStateError, InvalidTransitionError, SocAutonomyError
from .policy import AutonomyLevel, HitlMode, TriadicDecision, TrustBand, hitl_mode_for

DEFAULT_DISMISS_THRESHOLD = 0.95
DEFAULT_TICKET_SEVERITY = 0.7
DEFAULT_CORRELATION_WINDOW = 300.0
DEFAULT_APPROVAL_TIMEOUT = 1800.0


class WorkflowState(Enum):
    INGESTED = "Ingested"
    AI_TRIAGED = "AiTriaged"
    AWAITING_HUMAN_VALIDATION = "AwaitingHumanValidation"
    AUTO_DISMISSED = "AutoDismissed"
    DISMISSED = "Dismissed"
    TICKET_OPENED = "TicketOpened"
    UNDER_INVESTIGATION = "UnderInvestigation"
    AWAITING_APPROVAL = "AwaitingApproval"
    ACTION_EXECUTED = "ActionExecuted"
    ESCALATED = "Escalated"
    CONTAINED = "Contained"
    RECOVERED = "Recovered"
    CLOSED = "Closed"

    @property
    def terminal(self) -> bool:
        return self in TERMINAL_STATES


S = WorkflowState
TERMINAL_STATES = frozenset({S.AUTO_DISMISSED, S.DISMISSED, S.CLOSED})

EDGES = frozenset(
    {
        (S.INGESTED, S.AI_TRIAGED),
        (S.INGESTED, S.AWAITING_HUMAN_VALIDATION),
        (S.AI_TRIAGED, S.AWAITING_HUMAN_VALIDATION),
        (S.AI_TRIAGED, S.AUTO_DISMISSED),
        (S.AI_TRIAGED, S.TICKET_OPENED),
        (S.AWAITING_HUMAN_VALIDATION, S.DISMISSED),
        (S.AWAITING_HUMAN_VALIDATION, S.TICKET_OPENED),
        (S.TICKET_OPENED, S.UNDER_INVESTIGATION),
        (S.UNDER_INVESTIGATION, S.CLOSED),
        (S.UNDER_INVESTIGATION, S.AWAITING_APPROVAL),
        (S.UNDER_INVESTIGATION, S.ACTION_EXECUTED),
        (S.UNDER_INVESTIGATION, S.CONTAINED),
        (S.AWAITING_APPROVAL, S.ACTION_EXECUTED),
        (S.ACTION_EXECUTED, S.CONTAINED),
        (S.CONTAINED, S.RECOVERED),
        (S.CONTAINED, S.CLOSED),
        (S.RECOVERED, S.CLOSED),
        (S.ESCALATED, S.UNDER_INVESTIGATION),
        (S.ESCALATED, S.ACTION_EXECUTED),
        (S.ESCALATED, S.DISMISSED),
        (S.ESCALATED, S.TICKET_OPENED),
    }
    | {(s, S.ESCALATED) for s in WorkflowState if s not in TERMINAL_STATES}
)


class GroundTruth(Enum):
    MALICIOUS = "Malicious"
    BENIGN = "Benign"


class Actor(Enum):
    HUMAN = "Human"
    AI = "Ai"
    SYSTEM = "System"


class ActionKind(Enum):
    ISOLATE_HOST = "IsolateHost"
    BLOCK_IP = "BlockIp"
    LOCK_ACCOUNT = "LockAccount"
    RUN_PLAYBOOK = "RunPlaybook"
    RESTORE_SYSTEM = "RestoreSystem"
    PATCH_SYSTEM = "PatchSystem"


class RiskClass(IntEnum):
    LOW = 0
    MODERATE = 1
    HIGH = 2

    @classmethod
    def parse(cls, value: str | RiskClass) -> RiskClass:
        if isinstance(value, RiskClass):
            return value
        return cls[str(value).upper()]


class Executor(Enum):
    HUMAN = "Human"
    AI_WITH_APPROVAL = "AiWithApproval"
    AI_AUTONOMOUS = "AiAutonomous"


class Verdict(IntEnum):
    """Gating verdicts, ordered from strictest to most permissive."""

    HUMAN_ONLY = 0
    REQUIRE_APPROVAL = 1
    EXECUTE_AUTONOMOUSLY = 2

    @property
    def label(self) -> str:
        return {0: "HumanOnly", 1: "RequireApproval", 2: "ExecuteAutonomously"}[self.value]


class Phase(Enum):
    TRIAGE = "Triage"
    CONTAINMENT = "Containment"
    RECOVERY = "Recovery"


V = Verdict
R = RiskClass
# level -> risk class -> verdict
GATING_MATRIX = {
    AutonomyLevel.L0: {R.LOW: V.HUMAN_ONLY, R.MODERATE: V.HUMAN_ONLY, R.HIGH: V.HUMAN_ONLY},
    AutonomyLevel.L1: {
        R.LOW: V.REQUIRE_APPROVAL,
        R.MODERATE: V.REQUIRE_APPROVAL,
        R.HIGH: V.REQUIRE_APPROVAL,
    },
    AutonomyLevel.L2: {
        R.LOW: V.EXECUTE_AUTONOMOUSLY,
        R.MODERATE: V.REQUIRE_APPROVAL,
        R.HIGH: V.HUMAN_ONLY,
    },
    AutonomyLevel.L3: {
        R.LOW: V.EXECUTE_AUTONOMOUSLY,
        R.MODERATE: V.EXECUTE_AUTONOMOUSLY,
        R.HIGH: V.REQUIRE_APPROVAL,
    },
    AutonomyLevel.L4: {
        R.LOW: V.EXECUTE_AUTONOMOUSLY,
        R.MODERATE: V.EXECUTE_AUTONOMOUSLY,
        R.HIGH: V.EXECUTE_AUTONOMOUSLY,
    },
}


@dataclass
class ResponseAction:
    action_id: str
    kind: ActionKind
    risk_class: RiskClass
    requires_approval: bool = False
    executed_by: Executor | None = None


@dataclass
class AlertEvent:
    """A simulated alert; after ticketing its state mirrors its ticket."""

    alert_id: str
    arrival_time: float
    source_class: str
    ground_truth: GroundTruth
    severity: float
    ai_confidence: float = 0.0
    ai_label: GroundTruth | None = None
    state: WorkflowState = WorkflowState.INGESTED
    tier: Tier = Tier.TIER1
    ticket_id: str | None = None
    action: ResponseAction | None = None
    pending_verdict: Verdict | None = None
    approval_seen: bool = False
    escalated_from: WorkflowState | None = None

    def __post_init__(self) -> None:
        if self.arrival_time < 0:
            raise ValueError("arrival_time must be non-negative")


@dataclass
class Ticket:
    ticket_id: str
    alert_ids: set[str]
    opened_at: float
    opened_by: Actor
    resolved_at: float | None = None
    resolution_phase: Phase | None = None

    def resolve(self, time: float, phase: Phase) -> None:
        if time < self.opened_at:
            raise ValueError("resolved_at precedes opened_at")
        self.resolved_at = time
        self.resolution_phase = phase


@dataclass(frozen=True)
class Transition:
    item_id: str
    src: WorkflowState
    dst: WorkflowState
    actor: Actor
    reason: str = ""

    @property
    def label(self) -> str:
        return f"{self.src.value}->{self.dst.value}"


@dataclass
class EventRecord:
    """One line of the event log."""

    time: float
    item_id: str
    transition: str
    actor: str
    level: int | None = None
    verdict: str | None = None
    reason: str = ""
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "time": self.time,
            "item_id": self.item_id,
            "transition": self.transition,
            "actor": self.actor,
            "level": self.level,
            "verdict": self.verdict,
            "reason": self.reason,
        }
        d.update(self.extra)
        return d


class Signal(Enum):
    """Inputs that drive the machine one step."""

    TRIAGE = "triage"
    TRIAGE_DONE = "triage_done"
    VALIDATED = "validated"
    START_INVESTIGATION = "start_investigation"
    INVESTIGATION_DONE = "investigation_done"
    APPROVED = "approved"
    APPROVAL_TIMEOUT = "approval_timeout"
    CONTAINMENT_DONE = "containment_done"
    RECOVERY_DONE = "recovery_done"
    CLOSE = "close"
    ESCALATE = "escalate"


@dataclass(frozen=True)
class AgentOutputs:
    """What the acting agent reports alongside a signal.

    ``label`` is the human validation result or the investigation finding;
    ``action`` is the containment action proposed after a malicious finding.
    """

    signal: Signal
    label: GroundTruth | None = None
    action: ResponseAction | None = None
    tier: Tier | None = None
    reason: str = ""


@dataclass
class StepResult:
    state: WorkflowState
    events: list[EventRecord]


@dataclass(frozen=True)
class Escalation:
    transition: Transition
    target_tier: Tier
    event: EventRecord


# -- decision functions ------------------------------------------------------


def _level(decision: TriadicDecision) -> AutonomyLevel:
    return decision.operating_level


def route_alert(
    alert: AlertEvent,
    decision: TriadicDecision,
    dismiss_threshold: float = DEFAULT_DISMISS_THRESHOLD,
    ticket_severity: float = DEFAULT_TICKET_SEVERITY,
) -> Transition:
    """Where an ingested or AI-triaged alert goes next under ``decision``."""
    st = alert.state
    if st.terminal:
        raise InvalidStateError(f"alert {alert.alert_id} is already {st.value}")
    level = _level(decision)
    if st is S.INGESTED:
        if level is AutonomyLevel.L0:
            return Transition(alert.alert_id, st, S.AWAITING_HUMAN_VALIDATION, Actor.SYSTEM, "manual")
        return Transition(alert.alert_id, st, S.AI_TRIAGED, Actor.AI, "ai triage")
    if st is not S.AI_TRIAGED:
        raise InvalidStateError(f"alert {alert.alert_id} in {st.value} cannot be routed")

    if level <= AutonomyLevel.L1 or alert.ai_label is None:
        return Transition(alert.alert_id, st, S.AWAITING_HUMAN_VALIDATION, Actor.AI, "validate")
    benign = alert.ai_label is GroundTruth.BENIGN
    if level is AutonomyLevel.L4:
        if benign:
            return Transition(alert.alert_id, st, S.AUTO_DISMISSED, Actor.AI, "ai benign")
        return Transition(alert.alert_id, st, S.TICKET_OPENED, Actor.AI, "ai malicious")
    if benign and alert.ai_confidence >= dismiss_threshold:
        return Transition(alert.alert_id, st, S.AUTO_DISMISSED, Actor.AI, "confident benign")
    if not benign and alert.severity >= ticket_severity:
        return Transition(alert.alert_id, st, S.TICKET_OPENED, Actor.AI, "high severity")
    return Transition(alert.alert_id, st, S.AWAITING_HUMAN_VALIDATION, Actor.AI, "validate")


def gate_action(action: ResponseAction, decision: TriadicDecision) -> Verdict:
    return GATING_MATRIX[_level(decision)][RiskClass(action.risk_class)]


def requires_audit(decision: TriadicDecision) -> bool:
    return _level(decision) is AutonomyLevel.L4


# -- state-changing operations ------------------------------------------------


def _check_edge(item_id: str, src: WorkflowState, dst: WorkflowState) -> None:
    if (src, dst) not in EDGES:
        raise InvalidTransitionError(f"{item_id}: no edge {src.value} -> {dst.value}")


def _event(
    time: float,
    tr: Transition,
    decision: TriadicDecision | None,
    verdict: Verdict | None = None,
    **extra,
) -> EventRecord:
    return EventRecord(
        time=time,
        item_id=tr.item_id,
        transition=tr.label,
        actor=tr.actor.value,
        level=None if decision is None else int(_level(decision)),
        verdict=None if verdict is None else verdict.label,
        reason=tr.reason,
        extra=extra,
    )


def escalate(
    item: AlertEvent,
    from_tier: Tier,
    reason: str,
    time: float = 0.0,
    decision: TriadicDecision | None = None,
) -> Escalation:
    """Hand ``item`` to the next tier up (Tier4 is the ceiling)."""
    if item.state.terminal:
        raise InvalidStateError(f"{item.alert_id} is terminal ({item.state.value})")
    target = Tier.parse(from_tier).next_up()
    src = item.state
    _check_edge(item.alert_id, src, S.ESCALATED)
    if src is not S.ESCALATED:
        item.escalated_from = src
    item.state = S.ESCALATED
    item.tier = target
    tr = Transition(item.alert_id, src, S.ESCALATED, Actor.SYSTEM, reason)
    ev = _event(time, tr, decision, target_tier=target.label)
    return Escalation(tr, target, ev)


def open_ticket(
    alerts: Sequence[AlertEvent],
    opened_by: Actor,
    time: float,
    ticket_id: str | None = None,
) -> Ticket:
    """Create a ticket over ``alerts``; alerts not yet ticketed move to TicketOpened."""
    if not alerts:
        raise SocAutonomyError("cannot open a ticket without alerts")
    for a in alerts:
        if a.state.terminal:
            raise InvalidStateError(f"{a.alert_id} is terminal ({a.state.value})")
        if a.state is not S.TICKET_OPENED:
            _check_edge(a.alert_id, a.state, S.TICKET_OPENED)
    if ticket_id is None:
        ticket_id = f"T-{alerts[0].alert_id}"
    for a in alerts:
        a.state = S.TICKET_OPENED
        a.ticket_id = ticket_id
    return Ticket(ticket_id, {a.alert_id for a in alerts}, time, Actor(opened_by))


def _investigation_actor(decision: TriadicDecision) -> Actor:
    return Actor.AI if _level(decision) is AutonomyLevel.L4 else Actor.HUMAN


def step_workflow(
    item: AlertEvent,
    decision: TriadicDecision,
    outputs: AgentOutputs,
    time: float,
    dismiss_threshold: float = DEFAULT_DISMISS_THRESHOLD,
    ticket_severity: float = DEFAULT_TICKET_SEVERITY,
) -> StepResult:
    """Advance ``item`` by exactly one edge and return the emitted events.

    Raises :class:`InvalidTransitionError` for any (state, signal) pair the
    machine does not define, including every input to a terminal state.
    """
    src = item.state
    sig = outputs.signal
    if src.terminal:
        raise InvalidTransitionError(f"{item.alert_id}: terminal state {src.value} absorbs {sig.value}")
    level = _level(decision)
    events: list[EventRecord] = []
    verdict: Verdict | None = None

    def bad() -> InvalidTransitionError:
        return InvalidTransitionError(f"{item.alert_id}: {sig.value} undefined in {src.value}")

    if sig is Signal.ESCALATE or sig is Signal.APPROVAL_TIMEOUT:
        if sig is Signal.APPROVAL_TIMEOUT and src is not S.AWAITING_APPROVAL:
            raise bad()
        reason = outputs.reason or ("approval timeout" if sig is Signal.APPROVAL_TIMEOUT else "escalated")
        esc = escalate(item, outputs.tier or item.tier, reason, time, decision)
        return StepResult(item.state, [esc.event])

    if sig in (Signal.TRIAGE, Signal.TRIAGE_DONE):
        if (sig is Signal.TRIAGE) != (src is S.INGESTED) or src not in (S.INGESTED, S.AI_TRIAGED):
            raise bad()
        tr = route_alert(item, decision, dismiss_threshold, ticket_severity)
        extra = {}
        if tr.dst is S.AI_TRIAGED:
            extra = {"severity": item.severity}
        elif sig is Signal.TRIAGE_DONE:
            extra = {"ai_label": None if item.ai_label is None else item.ai_label.value,
                     "ai_confidence": item.ai_confidence}
    elif sig is Signal.VALIDATED:
        if src not in (S.AWAITING_HUMAN_VALIDATION, S.ESCALATED) or outputs.label is None:
            raise bad()
        if src is S.ESCALATED and item.escalated_from not in (S.AWAITING_HUMAN_VALIDATION, S.AI_TRIAGED, S.INGESTED):
            raise bad()
        dst = S.TICKET_OPENED if outputs.label is GroundTruth.MALICIOUS else S.DISMISSED
        tr = Transition(item.alert_id, src, dst, Actor.HUMAN, f"validated {outputs.label.value}")
        extra = {}
    elif sig is Signal.START_INVESTIGATION:
        if src is S.ESCALATED:
            if item.escalated_from not in (S.TICKET_OPENED, S.UNDER_INVESTIGATION):
                raise bad()
        elif src is not S.TICKET_OPENED:
            raise bad()
        tr = Transition(item.alert_id, src, S.UNDER_INVESTIGATION, _investigation_actor(decision), "investigate")
        extra = {}
    elif sig is Signal.INVESTIGATION_DONE:
        if src is not S.UNDER_INVESTIGATION or outputs.label is None:
            raise bad()
        actor = _investigation_actor(decision)
        if outputs.label is GroundTruth.BENIGN:
            tr = Transition(item.alert_id, src, S.CLOSED, actor, "false positive")
            extra = {}
        else:
            action = outputs.action
            if action is None:
                raise bad()
            verdict = gate_action(action, decision)
            item.pending_verdict = verdict
            item.action = action
            act_extra = {"action_id": action.action_id, "kind": action.kind.value,
                         "risk_class": action.risk_class.name.capitalize()}
            if verdict is Verdict.EXECUTE_AUTONOMOUSLY:
                action.executed_by = Executor.AI_AUTONOMOUS
                action.requires_approval = False
                tr = Transition(item.alert_id, src, S.CONTAINED, Actor.AI, "root cause; autonomous containment")
                events.append(EventRecord(time, item.alert_id, "action", Actor.AI.value, int(level),
                                          verdict.label, "autonomous",
                                          {**act_extra, "executed_by": Executor.AI_AUTONOMOUS.value}))
                if requires_audit(decision):
                    events.append(EventRecord(time, item.alert_id, "audit", Actor.AI.value, int(level),
                                              verdict.label, "audit record", dict(act_extra)))
            elif verdict is Verdict.REQUIRE_APPROVAL:
                action.requires_approval = True
                tr = Transition(item.alert_id, src, S.AWAITING_APPROVAL, actor, "approval required")
            else:
                action.requires_approval = False
                action.executed_by = Executor.HUMAN
                tr = Transition(item.alert_id, src, S.ACTION_EXECUTED, Actor.HUMAN, "human executes")
                events.append(EventRecord(time, item.alert_id, "action", Actor.HUMAN.value, int(level),
                                          verdict.label, "human only",
                                          {**act_extra, "executed_by": Executor.HUMAN.value}))
            extra = act_extra
    elif sig is Signal.APPROVED:
        if src is S.ESCALATED:
            if item.escalated_from is not S.AWAITING_APPROVAL:
                raise bad()
        elif src is not S.AWAITING_APPROVAL:
            raise bad()
        action = item.action
        if action is None or item.pending_verdict is not Verdict.REQUIRE_APPROVAL or not item.approval_seen:
            raise bad()
        action.executed_by = Executor.AI_WITH_APPROVAL
        verdict = Verdict.REQUIRE_APPROVAL
        tr = Transition(item.alert_id, src, S.ACTION_EXECUTED, Actor.HUMAN, "approved")
        events.append(EventRecord(time, item.alert_id, "action", Actor.AI.value, int(level),
                                  verdict.label, "approved execution",
                                  {"action_id": action.action_id, "kind": action.kind.value,
                                   "risk_class": action.risk_class.name.capitalize(),
                                   "executed_by": Executor.AI_WITH_APPROVAL.value}))
        extra = {}
    elif sig is Signal.CONTAINMENT_DONE:
        if src is not S.ACTION_EXECUTED or item.action is None:
            raise bad()
        actor = Actor.HUMAN if item.action.executed_by is Executor.HUMAN else Actor.AI
        tr = Transition(item.alert_id, src, S.CONTAINED, actor, "contained")
        extra = {}
    elif sig is Signal.RECOVERY_DONE:
        if src is not S.CONTAINED:
            raise bad()
        tr = Transition(item.alert_id, src, S.RECOVERED, _investigation_actor(decision), "restored")
        extra = {}
    elif sig is Signal.CLOSE:
        if src not in (S.RECOVERED, S.CONTAINED):
            raise bad()
        tr = Transition(item.alert_id, src, S.CLOSED, _investigation_actor(decision), "closed")
        extra = {}
    else:  # pragma: no cover
        raise bad()

    _check_edge(item.alert_id, tr.src, tr.dst)
    if tr.dst is S.AWAITING_APPROVAL:
        item.approval_seen = True
    item.state = tr.dst
    if item.ticket_id is not None:
        extra = {"ticket_id": item.ticket_id, **extra}
    events.insert(0, _event(time, tr, decision, verdict, **extra))
    return StepResult(item.state, events)


# -- exhaustive model check -----------------------------------------------------


def _decision_at(level: AutonomyLevel) -> TriadicDecision:
    a = {0: 0.0, 1: 0.3, 2: 0.5, 3: 0.75, 4: 0.95}[int(level)]
    return TriadicDecision(
        trust=0.5,
        autonomy=a,
        hitl=1.0 - a,
        level=level,
        mode=hitl_mode_for(level),
        trust_band=TrustBand.MEDIUM,
        delegation_allowed=True,
    )


@dataclass
class ModelCheckReport:
    configurations: int
    transitions: int
    rejected_inputs: int
    violations: list[str]
    pairs_checked: set[tuple[int, int, str]]

    @property
    def ok(self) -> bool:
        return not self.violations


def _snapshot(a: AlertEvent) -> tuple:
    act = a.action
    # Triage inputs are never read once routing is done; canonicalise them so
    # equivalent configurations collapse.
    routed = a.state not in (S.INGESTED, S.AI_TRIAGED)
    return (
        a.state,
        None if routed else a.ai_label,
        0.0 if routed else a.ai_confidence,
        0.0 if routed else a.severity,
        GroundTruth.BENIGN if routed else a.ground_truth,
        a.tier,
        a.pending_verdict,
        a.approval_seen,
        a.escalated_from,
        None if act is None else (act.risk_class, act.requires_approval, act.executed_by),
    )


def _restore(snap: tuple, alert_id: str, cls: str, risk: RiskClass) -> AlertEvent:
    (state, ai_label, conf, sev, gt, tier, pv, seen, esc_from, act) = snap
    a = AlertEvent(alert_id, 0.0, cls, gt, sev, conf, ai_label, state, tier)
    a.pending_verdict, a.approval_seen, a.escalated_from = pv, seen, esc_from
    if act is not None:
        a.action = ResponseAction("act", ActionKind.RUN_PLAYBOOK, act[0], act[1], act[2])
    return a


def model_check(max_configurations: int = 100_000) -> ModelCheckReport:
    """Breadth-first exploration of every reachable configuration.

    The product covers all autonomy levels, risk classes, AI labels,
    confidence/severity regimes, ground truths and every signal/output
    combination. Checked properties: no autonomous High-risk execution below
    L4, no execution after a RequireApproval verdict without passing through
    AwaitingApproval, terminal absorption, and no AI actor at L0.
    """
    violations: list[str] = []
    pairs: set[tuple[int, int, str]] = set()
    labels = (GroundTruth.MALICIOUS, GroundTruth.BENIGN)
    # Labels and actions only matter to the signals that read them; a missing
    # label or action is still offered so the rejection path is exercised.
    placeholder = ResponseAction("act", ActionKind.RUN_PLAYBOOK, RiskClass.LOW)
    outputs_menu: list[AgentOutputs] = []
    for sig in Signal:
        if sig is Signal.VALIDATED:
            outputs_menu += [AgentOutputs(sig, lab) for lab in (None, *labels)]
        elif sig is Signal.INVESTIGATION_DONE:
            outputs_menu += [
                AgentOutputs(sig, None, placeholder),
                AgentOutputs(sig, GroundTruth.BENIGN),
                AgentOutputs(sig, GroundTruth.MALICIOUS),
                AgentOutputs(sig, GroundTruth.MALICIOUS, placeholder),
            ]
        else:
            outputs_menu.append(AgentOutputs(sig))

    seen: set[tuple] = set()
    n_trans = n_rej = 0
    queue: deque[tuple[AutonomyLevel, RiskClass, tuple]] = deque()
    for level in AutonomyLevel:
        for risk in RiskClass:
            for gt in labels:
                for ai_label in labels:
                    for conf in (0.5, 0.99):
                        for sev in (0.2, 0.9):
                            a = AlertEvent("x", 0.0, "c", gt, sev, conf, ai_label)
                            queue.append((level, risk, _snapshot(a)))
    while queue:
        level, risk, snap = queue.popleft()
        key = (level, risk, snap)
        if key in seen:
            continue
        seen.add(key)
        if len(seen) > max_configurations:
            violations.append("state space exceeded bound")
            break
        decision = _decision_at(level)
        for out in outputs_menu:
            item = _restore(snap, "x", "c", risk)
            if out.action is not None:
                out = replace(out, action=ResponseAction("act", ActionKind.RUN_PLAYBOOK, risk))
            before = item.state
            try:
                res = step_workflow(item, decision, out, 0.0)
            except (InvalidTransitionError, InvalidStateError):
                n_rej += 1
                continue
            n_trans += 1
            if before.terminal:
                violations.append(f"terminal {before.value} accepted {out.signal.value}")
            if (before, res.state) not in EDGES:
                violations.append(f"undeclared edge {before.value}->{res.state.value}")
            act = item.action
            if res.state is S.ACTION_EXECUTED or res.state is S.CONTAINED:
                if act is not None and item.pending_verdict is not None:
                    pairs.add((int(level), int(act.risk_class), item.pending_verdict.label))
            for ev in res.events:
                if ev.transition == "action":
                    if (
                        ev.extra.get("executed_by") == Executor.AI_AUTONOMOUS.value
                        and ev.extra.get("risk_class") == "High"
                        and level <= AutonomyLevel.L3
                    ):
                        violations.append(f"autonomous High-risk action at L{int(level)}")
                    if (
                        item.pending_verdict is Verdict.REQUIRE_APPROVAL
                        and ev.extra.get("executed_by") != Executor.HUMAN.value
                        and not item.approval_seen
                    ):
                        violations.append(f"approval gate bypassed at L{int(level)}")
                if level is AutonomyLevel.L0 and ev.actor == Actor.AI.value:
                    violations.append(f"AI actor at L0 ({ev.transition})")
            if item.pending_verdict is Verdict.REQUIRE_APPROVAL and res.state is S.ACTION_EXECUTED:
                if not item.approval_seen:
                    violations.append("ActionExecuted reached without AwaitingApproval")
            queue.append((level, risk, _snapshot(item)))
    return ModelCheckReport(len(seen), n_trans, n_rej, violations, pairs)


def iter_edges() -> Iterable[tuple[str, str]]:
    return sorted((a.value, b.value) for a, b in EDGES)


__all__ = [
    "AgentOutputs",
    "ActionKind",
    "Actor",
    "AlertEvent",
    "EDGES",
    "EventRecord",
    "Executor",
    "GATING_MATRIX",
    "GroundTruth",
    "HitlMode",
    "ModelCheckReport",
    "Phase",
    "ResponseAction",
    "RiskClass",
    "Signal",
    "StepResult",
    "TERMINAL_STATES",
    "Ticket",
    "Transition",
    "Verdict",
    "WorkflowState",
    "escalate",
    "gate_action",
    "model_check",
    "open_ticket",
    "requires_audit",
    "route_alert",
    "step_workflow",
]
