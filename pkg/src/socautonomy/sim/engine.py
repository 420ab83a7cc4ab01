"""Seeded discrete-event simulation of a tiered, AI-assisted SOC.

A single logical clock advances over a heap of (time, sequence) keyed
events. Analysts are unit-capacity servers with per-tier FIFO queues; the
AI agent has unbounded capacity. Every state change of every alert is
made through :func:`socautonomy.workflow.step_workflow` and logged.
"""

from __future__ import annotations

import hashlib
import heapq
import json
import math
import random
import zlib
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from ..catalog import Tier, TaskProfile, lookup
from ..errors import ConfigError
from ..policy import AutonomyLevel, Diagnostics, TriadicDecision, TrustState, triadic_decision
from ..trust import Outcome, OutcomeKind, TrustLedger, current_trust, record_outcome
from ..workflow import (
    Actor,
    AgentOutputs,
    AlertEvent,
    EventRecord,
    GroundTruth,
    Phase,
    ResponseAction,
    Signal,
    Ticket,
    Verdict,
    WorkflowState,
    step_workflow,
)
from .config import LogNormal, ScenarioConfig, scenario_to_dict

S = WorkflowState


# -- random streams -------------------------------------------------------------


class Streams:
    """Named, independent random streams derived from one master seed.

    Each name hashes (crc32) into the spawn key of a numpy ``SeedSequence``,
    so adding a stream never shifts the draws of another.
    """

    def __init__(self, seed: int) -> None:
        self.seed = int(seed)
        self._streams: dict[str, random.Random] = {}

    def __call__(self, name: str) -> random.Random:
        rng = self._streams.get(name)
        if rng is None:
            ss = np.random.SeedSequence(self.seed, spawn_key=(zlib.crc32(name.encode()),))
            state = ss.generate_state(4, dtype=np.uint32)
            rng = random.Random(int.from_bytes(state.tobytes(), "little"))
            self._streams[name] = rng
        return rng


def sample_lognormal(rng: random.Random, dist: LogNormal, speedup: float = 1.0) -> float:
    mu = math.log(dist.mean) - 0.5 * dist.sigma * dist.sigma
    return rng.lognormvariate(mu, dist.sigma) / speedup


# -- alert generation ------------------------------------------------------------


def generate_alerts(config: ScenarioConfig, streams: Streams | None = None) -> list[AlertEvent]:
    """Poisson arrivals per class over ``[0, duration)``, merged by time."""
    streams = streams or Streams(config.seed)
    raw: list[tuple[float, int, int, GroundTruth, float]] = []
    for order, mix in enumerate(config.classes):
        if mix.arrival_rate <= 0:
            continue
        arr = streams(f"arrivals/{mix.class_id}")
        lab = streams(f"labels/{mix.class_id}")
        sev = streams(f"severity/{mix.class_id}")
        rate = mix.arrival_rate / 3600.0
        t = arr.expovariate(rate)
        k = 0
        while t < config.duration:
            gt = GroundTruth.MALICIOUS if lab.random() < mix.malicious_fraction else GroundTruth.BENIGN
            lo, hi = config.severity_malicious if gt is GroundTruth.MALICIOUS else config.severity_benign
            raw.append((t, order, k, gt, sev.uniform(lo, hi)))
            k += 1
            t += arr.expovariate(rate)
    raw.sort(key=lambda r: (r[0], r[1], r[2]))
    return [
        AlertEvent(f"A{i:06d}", t, config.classes[order].class_id, gt, severity)
        for i, (t, order, _, gt, severity) in enumerate(raw)
    ]


# -- trace ------------------------------------------------------------------------


@dataclass
class EventTrace:
    records: list[dict]
    summary: dict = field(default_factory=dict)

    def lines(self) -> Iterator[str]:
        for rec in self.records:
            yield json.dumps(rec, separators=(",", ":"), allow_nan=False)
        yield json.dumps({"transition": "run_end", **self.summary}, separators=(",", ":"))

    def to_jsonl(self) -> str:
        return "\n".join(self.lines()) + "\n"

    def write(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for line in self.lines():
                fh.write(line)
                fh.write("\n")

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> EventTrace:
        records, summary = [], {}
        for line in lines:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            if rec.get("transition") == "run_end":
                summary = {k: v for k, v in rec.items() if k != "transition"}
            else:
                records.append(rec)
        return cls(records, summary)

    @classmethod
    def read(cls, path: str | Path) -> EventTrace:
        with open(path, encoding="utf-8") as fh:
            return cls.from_lines(fh)


# -- runtime entities ---------------------------------------------------------------


@dataclass
class AnalystAgent:
    analyst_id: str
    tier: Tier
    busy: bool = False
    jobs_done: int = 0


@dataclass
class Job:
    phase: str
    tier: Tier
    payload: object
    started: bool = False
    cancelled: bool = False


@dataclass
class _TicketWork:
    ticket: Ticket
    members: list[AlertEvent]
    decision: TriadicDecision
    profile: TaskProfile
    class_index: int
    tier: Tier
    started: bool = False


# -- the simulator -----------------------------------------------------------------


class Simulation:
    def __init__(self, config: ScenarioConfig) -> None:
        self.cfg = config
        self.streams = Streams(config.seed)
        self.now = 0.0
        self._heap: list[tuple[float, int, Callable, tuple]] = []
        self._seq = 0
        self.records: list[dict] = []
        self.diagnostics = Diagnostics()
        self.tpr = config.ai_profile.true_positive_rate
        self.ledgers: dict[str, TrustLedger] = {}
        self.decisions: dict[str, TriadicDecision] = {}
        self.ai_pending: set[str] = set()
        self.detected: set[str] = set()
        self.tickets: dict[str, _TicketWork] = {}
        self.open_by_class: dict[str, _TicketWork] = {}
        self.mix = {m.class_id: m for m in config.classes}
        self.profiles = {m.class_id: lookup(config.catalog, m.class_id) for m in config.classes}
        self.class_index = {m.class_id: i for i, m in enumerate(config.classes)}
        self.analysts: dict[Tier, list[AnalystAgent]] = {}
        self.queues: dict[Tier, deque[Job]] = {}
        for tier in Tier:
            pool = config.analyst_pool.get(tier)
            n = pool.count if pool else 0
            self.analysts[tier] = [AnalystAgent(f"{tier.label}-{i:02d}", tier) for i in range(n)]
            self.queues[tier] = deque()
        self.n_outcomes = 0

    # scheduling ------------------------------------------------------------------

    def schedule(self, delay: float, fn: Callable, *args) -> None:
        self._seq += 1
        heapq.heappush(self._heap, (self.now + delay, self._seq, fn, args))

    def emit(self, rec: EventRecord | dict) -> None:
        d = rec.to_dict() if isinstance(rec, EventRecord) else rec
        d["time"] = round(d["time"], 6)
        self.records.append(d)

    def sys_event(self, item_id: str, name: str, actor: str = "System", **extra) -> None:
        d = {"time": self.now, "item_id": item_id, "transition": name, "actor": actor,
             "level": None, "verdict": None, "reason": ""}
        d.update(extra)
        self.emit(d)

    def step(self, alert: AlertEvent, decision: TriadicDecision, outputs: AgentOutputs) -> WorkflowState:
        res = step_workflow(
            alert,
            decision,
            outputs,
            self.now,
            self.cfg.thresholds.dismiss,
            self.cfg.thresholds.ticket_severity,
        )
        for ev in res.events:
            self.emit(ev)
        return res.state

    # staffing ------------------------------------------------------------------------

    def staffed_tier(self, tier: Tier) -> Tier:
        """Nearest tier at or above ``tier`` with analysts, else the highest staffed tier."""
        for t in Tier:
            if t.value >= tier.value and self.analysts[t]:
                return t
        for t in reversed(list(Tier)):
            if self.analysts[t]:
                return t
        raise ConfigError("no analysts")  # pragma: no cover

    def submit(self, job: Job) -> None:
        job.tier = self.staffed_tier(job.tier)
        for analyst in self.analysts[job.tier]:
            if not analyst.busy:
                self._start(analyst, job)
                return
        self.queues[job.tier].append(job)

    def _start(self, analyst: AnalystAgent, job: Job) -> None:
        analyst.busy = True
        job.started = True
        duration = JOB_START[job.phase](self, job, analyst)
        self.sys_event(_job_item(job), "analyst_start", "Human", analyst_id=analyst.analyst_id, phase=job.phase)
        self.schedule(duration, self._finish, analyst, job)

    def _finish(self, analyst: AnalystAgent, job: Job) -> None:
        self.sys_event(_job_item(job), "analyst_end", "Human", analyst_id=analyst.analyst_id, phase=job.phase)
        analyst.jobs_done += 1
        # Still busy while follow-up work is submitted, so it queues behind
        # older jobs instead of jumping onto this analyst.
        JOB_END[job.phase](self, job, analyst)
        analyst.busy = False
        q = self.queues[analyst.tier]
        while q:
            nxt = q.popleft()
            if not nxt.cancelled:
                self._start(analyst, nxt)
                break

    def service_time(self, tier: Tier, phase: str, level: int) -> float:
        dist = self.cfg.service(tier, phase)
        speed = self.cfg.ai_profile.speedup(phase, level)
        return sample_lognormal(self.streams(f"service/{phase}"), dist, speed)

    # trust -----------------------------------------------------------------------------

    def ledger(self, class_id: str) -> TrustLedger:
        led = self.ledgers.get(class_id)
        if led is None:
            p = self.cfg.ai_profile
            led = TrustLedger.fresh(
                p.agent_id,
                class_id,
                p.explainability,
                self.cfg.initial_performance,
                self.cfg.initial_uncertainty,
                self.cfg.ewma_rate,
            )
            self.ledgers[class_id] = led
        return led

    def record(self, alert: AlertEvent, kind: OutcomeKind) -> None:
        if alert.ai_label is None:
            return
        self.ai_pending.discard(alert.alert_id)
        led = record_outcome(self.ledger(alert.source_class), Outcome(kind, alert.ai_confidence))
        self.ledgers[alert.source_class] = led
        self.n_outcomes += 1
        self.sys_event(
            alert.alert_id,
            "trust_update",
            class_id=alert.source_class,
            agent_id=led.agent_id,
            outcome=kind.value,
            trust=round(current_trust(led, self.cfg.weights), 12),
            P=round(led.state.performance_history, 12),
            U=round(led.state.uncertainty, 12),
            n=led.interaction_count,
        )

    def decide(self, alert: AlertEvent) -> TriadicDecision:
        led = self.ledger(alert.source_class)
        d = triadic_decision(self.profiles[alert.source_class], led.state, self.cfg.weights, self.diagnostics)
        return d.capped(self.cfg.autonomy_cap)

    # alert stage ---------------------------------------------------------------------------

    def on_arrival(self, alert: AlertEvent) -> None:
        decision = self.decide(alert)
        self.decisions[alert.alert_id] = decision
        self.sys_event(
            alert.alert_id,
            "ingest",
            class_id=alert.source_class,
            ground_truth=alert.ground_truth.value,
            severity=round(alert.severity, 12),
            trust=round(decision.trust, 12),
            autonomy=round(decision.autonomy, 12),
            decision_level=int(decision.level),
            operating_level=int(decision.operating_level),
            delegation_allowed=decision.delegation_allowed,
        )
        if decision.operating_level is AutonomyLevel.L0:
            self.step(alert, decision, AgentOutputs(Signal.TRIAGE))
            self.submit(Job("validation", Tier.TIER1, alert))
        else:
            latency = sample_lognormal(self.streams("ai/latency"), self.cfg.ai_profile.triage_latency)
            self.schedule(latency, self.on_ai_triage, alert)

    def on_ai_triage(self, alert: AlertEvent) -> None:
        decision = self.decisions[alert.alert_id]
        prof = self.cfg.ai_profile
        draw = self.streams("ai/correctness").random()
        if alert.ground_truth is GroundTruth.MALICIOUS:
            says_malicious = draw < self.tpr
        else:
            says_malicious = draw < prof.false_positive_rate
        alert.ai_label = GroundTruth.MALICIOUS if says_malicious else GroundTruth.BENIGN
        correct = alert.ai_label is alert.ground_truth
        lo, hi = prof.confidence_correct if correct else prof.confidence_incorrect
        alert.ai_confidence = self.streams("ai/confidence").uniform(lo, hi)
        self.ai_pending.add(alert.alert_id)
        self.step(alert, decision, AgentOutputs(Signal.TRIAGE))
        if says_malicious:
            self.detected.add(alert.alert_id)
            self.sys_event(alert.alert_id, "detect", "Ai")
        state = self.step(alert, decision, AgentOutputs(Signal.TRIAGE_DONE))
        if state is S.AUTO_DISMISSED:
            self.record(alert, OutcomeKind.CORRECT_ACTION if correct else OutcomeKind.MISSED_THREAT)
        elif state is S.AWAITING_HUMAN_VALIDATION:
            self.submit(Job("validation", Tier.TIER1, alert))
        elif state is S.TICKET_OPENED:
            self.ticket_alert(alert, decision)

    def validation_start(self, job: Job, analyst: AnalystAgent) -> float:
        alert: AlertEvent = job.payload
        level = int(self.decisions[alert.alert_id].operating_level)
        return self.service_time(analyst.tier, "validation", level)

    def validation_end(self, job: Job, analyst: AnalystAgent) -> None:
        alert: AlertEvent = job.payload
        decision = self.decisions[alert.alert_id]
        truth = alert.ground_truth
        if alert.ai_label is not None:
            kind = OutcomeKind.CORRECT_ACTION if alert.ai_label is truth else OutcomeKind.HUMAN_OVERRIDE
            self.record(alert, kind)
        if truth is GroundTruth.MALICIOUS and alert.alert_id not in self.detected:
            self.detected.add(alert.alert_id)
            self.sys_event(alert.alert_id, "detect", "Human", analyst_id=analyst.analyst_id)
        state = self.step(alert, decision, AgentOutputs(Signal.VALIDATED, truth))
        if state is S.TICKET_OPENED:
            self.ticket_alert(alert, decision)

    # ticket stage -------------------------------------------------------------------------------

    def ticket_alert(self, alert: AlertEvent, decision: TriadicDecision) -> None:
        cid = alert.source_class
        window = self.cfg.thresholds.correlation_window
        open_work = self.open_by_class.get(cid)
        if (
            open_work is not None
            and not open_work.started
            and self.now - open_work.ticket.opened_at <= window
        ):
            alert.ticket_id = open_work.ticket.ticket_id
            open_work.members.append(alert)
            open_work.ticket.alert_ids.add(alert.alert_id)
            self.sys_event(alert.alert_id, "ticket_join", ticket_id=alert.ticket_id, class_id=cid)
            return
        profile = self.profiles[cid]
        opened_by = Actor.AI if decision.operating_level >= AutonomyLevel.L2 else Actor.HUMAN
        ticket = Ticket(f"T-{alert.alert_id}", {alert.alert_id}, self.now, opened_by)
        alert.ticket_id = ticket.ticket_id
        tier = max(Tier.TIER2, profile.tier, key=lambda t: t.value)
        work = _TicketWork(ticket, [alert], decision, profile, self.class_index[cid], tier)
        self.tickets[ticket.ticket_id] = work
        self.open_by_class[cid] = work
        self.sys_event(
            alert.alert_id,
            "ticket_open",
            opened_by.value,
            ticket_id=ticket.ticket_id,
            class_id=cid,
            level=int(decision.operating_level),
        )
        self.begin_investigation(work)

    def ticket_step(self, work: _TicketWork, outputs: AgentOutputs) -> WorkflowState:
        state = None
        for member in work.members:
            state = self.step(member, work.decision, outputs)
        return state

    @staticmethod
    def _is_ai(work: _TicketWork) -> bool:
        return work.decision.operating_level is AutonomyLevel.L4

    def begin_investigation(self, work: _TicketWork) -> None:
        if self._is_ai(work):
            self._investigation_started(work)
            dist = self.cfg.service(work.tier, "investigation")
            speed = self.cfg.ai_profile.speedup("investigation", 4)
            self.schedule(sample_lognormal(self.streams("service/investigation"), dist, speed),
                          self.investigation_done, work)
        else:
            self.submit(Job("investigation", work.tier, work))

    def _investigation_started(self, work: _TicketWork) -> None:
        work.started = True
        if self.open_by_class.get(work.profile.class_id) is work:
            del self.open_by_class[work.profile.class_id]
        self.ticket_step(work, AgentOutputs(Signal.START_INVESTIGATION))

    def investigation_start(self, job: Job, analyst: AnalystAgent) -> float:
        work: _TicketWork = job.payload
        self._investigation_started(work)
        return self.service_time(analyst.tier, "investigation", int(work.decision.operating_level))

    def investigation_end(self, job: Job, analyst: AnalystAgent) -> None:
        self.investigation_done(job.payload, analyst.tier)

    def investigation_done(self, work: _TicketWork, tier: Tier | None = None) -> None:
        level = work.decision.operating_level
        malicious = any(m.ground_truth is GroundTruth.MALICIOUS for m in work.members)
        if (
            malicious
            and tier is not None
            and self.cfg.ambiguity_rate > 0
            and tier.value < Tier.TIER4.value
            and self.streams("ambiguity").random() < self.cfg.ambiguity_rate
        ):
            for m in work.members:
                if m.alert_id in self.ai_pending:
                    self.record(m, OutcomeKind.ESCALATED_CORRECTLY)
            self.ticket_step(work, AgentOutputs(Signal.ESCALATE, tier=tier, reason="ambiguous case"))
            work.tier = tier.next_up()
            self.submit(Job("investigation", work.tier, work))
            return
        for m in work.members:
            if m.alert_id in self.ai_pending:
                ok = m.ground_truth is GroundTruth.MALICIOUS
                self.record(m, OutcomeKind.CORRECT_ACTION if ok else OutcomeKind.INCORRECT_ACTION)
        if not malicious:
            self.ticket_step(work, AgentOutputs(Signal.INVESTIGATION_DONE, GroundTruth.BENIGN))
            self.close_ticket(work, Phase.TRIAGE)
            return
        if level >= AutonomyLevel.L2 and self.cfg.learning_delta > 0:
            self.tpr = min(1.0, self.tpr + self.cfg.learning_delta)
        mix = self.mix[work.profile.class_id]
        action = ResponseAction(f"R-{work.ticket.ticket_id}", mix.action, mix.action_risk)
        state = self.ticket_step(work, AgentOutputs(Signal.INVESTIGATION_DONE, GroundTruth.MALICIOUS, action))
        verdict = work.members[0].pending_verdict
        if state is S.CONTAINED:
            self.after_containment(work)
        elif verdict is Verdict.REQUIRE_APPROVAL:
            job = Job("approval", Tier.TIER2, work)
            self.submit(job)
            if not job.started:
                self.schedule(self.cfg.thresholds.approval_timeout, self.approval_timeout, work, job)
        else:
            self.submit(Job("containment", work.tier, work))

    def approval_timeout(self, work: _TicketWork, job: Job) -> None:
        if job.started or job.cancelled:
            return
        job.cancelled = True
        self.ticket_step(work, AgentOutputs(Signal.APPROVAL_TIMEOUT, tier=job.tier))
        self.submit(Job("approval", job.tier.next_up(), work))

    def approval_start(self, job: Job, analyst: AnalystAgent) -> float:
        work: _TicketWork = job.payload
        return self.service_time(analyst.tier, "approval", int(work.decision.operating_level))

    def approval_end(self, job: Job, analyst: AnalystAgent) -> None:
        work: _TicketWork = job.payload
        self.ticket_step(work, AgentOutputs(Signal.APPROVED))
        latency = sample_lognormal(self.streams("ai/action"), self.cfg.ai_profile.action_latency)
        self.schedule(latency, self.containment_done, work)

    def containment_start(self, job: Job, analyst: AnalystAgent) -> float:
        work: _TicketWork = job.payload
        return self.service_time(analyst.tier, "containment", int(work.decision.operating_level))

    def containment_end(self, job: Job, analyst: AnalystAgent) -> None:
        self.containment_done(job.payload)

    def containment_done(self, work: _TicketWork) -> None:
        self.ticket_step(work, AgentOutputs(Signal.CONTAINMENT_DONE))
        self.after_containment(work)

    def after_containment(self, work: _TicketWork) -> None:
        if not self.mix[work.profile.class_id].recovery:
            self.ticket_step(work, AgentOutputs(Signal.CLOSE))
            self.close_ticket(work, Phase.CONTAINMENT)
            return
        recovery_tier = max(Tier.TIER3, work.tier, key=lambda t: t.value)
        if self._is_ai(work):
            dist = self.cfg.service(recovery_tier, "recovery")
            speed = self.cfg.ai_profile.speedup("recovery", 4)
            self.schedule(sample_lognormal(self.streams("service/recovery"), dist, speed),
                          self.recovery_done, work)
        else:
            self.submit(Job("recovery", recovery_tier, work))

    def recovery_start(self, job: Job, analyst: AnalystAgent) -> float:
        work: _TicketWork = job.payload
        return self.service_time(analyst.tier, "recovery", int(work.decision.operating_level))

    def recovery_end(self, job: Job, analyst: AnalystAgent) -> None:
        self.recovery_done(job.payload)

    def recovery_done(self, work: _TicketWork) -> None:
        self.ticket_step(work, AgentOutputs(Signal.RECOVERY_DONE))
        self.ticket_step(work, AgentOutputs(Signal.CLOSE))
        self.close_ticket(work, Phase.RECOVERY)

    def close_ticket(self, work: _TicketWork, phase: Phase) -> None:
        work.ticket.resolve(self.now, phase)
        self.sys_event(
            work.members[0].alert_id,
            "ticket_close",
            ticket_id=work.ticket.ticket_id,
            opened_at=round(work.ticket.opened_at, 6),
            phase=phase.value,
            alerts=sorted(work.ticket.alert_ids),
        )

    # main loop ---------------------------------------------------------------------------------

    def run(self) -> EventTrace:
        alerts = generate_alerts(self.cfg, self.streams)
        for alert in alerts:
            self._seq += 1
            heapq.heappush(self._heap, (alert.arrival_time, self._seq, self.on_arrival, (alert,)))
        heap = self._heap
        while heap:
            t, _, fn, args = heapq.heappop(heap)
            self.now = t
            fn(*args)
        counts = {s.value: 0 for s in (S.AUTO_DISMISSED, S.DISMISSED, S.CLOSED)}
        open_items = 0
        for a in alerts:
            if a.state.terminal:
                counts[a.state.value] += 1
            else:
                open_items += 1
        summary = {
            "scenario": self.cfg.name,
            "config_digest": config_digest(self.cfg),
            "seed": self.cfg.seed,
            "autonomy_cap": None if self.cfg.autonomy_cap is None else int(self.cfg.autonomy_cap),
            "generated": len(alerts),
            "terminal": counts,
            "open": open_items,
            "outcomes_recorded": self.n_outcomes,
            "clamped_autonomy": self.diagnostics.clamped,
            "end_time": round(self.now, 6),
        }
        return EventTrace(self.records, summary)


def config_digest(config: ScenarioConfig) -> str:
    """Hash of everything but the seed and autonomy cap, used to pair baseline runs."""
    doc = scenario_to_dict(config)
    doc.pop("seed")
    doc.pop("autonomy_cap")
    doc["catalog"] = [p.to_dict() for p in config.catalog]
    blob = json.dumps(doc, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _job_item(job: Job) -> str:
    p = job.payload
    if isinstance(p, AlertEvent):
        return p.alert_id
    return p.members[0].alert_id


JOB_START = {
    "validation": Simulation.validation_start,
    "investigation": Simulation.investigation_start,
    "approval": Simulation.approval_start,
    "containment": Simulation.containment_start,
    "recovery": Simulation.recovery_start,
}
JOB_END = {
    "validation": Simulation.validation_end,
    "investigation": Simulation.investigation_end,
    "approval": Simulation.approval_end,
    "containment": Simulation.containment_end,
    "recovery": Simulation.recovery_end,
}


# -- public entry points ------------------------------------------------------------------------


def run(config: ScenarioConfig):
    """Simulate one scenario; returns ``(trace, metrics)``."""
    from ..metrics import compute_metrics

    trace = Simulation(config).run()
    return trace, compute_metrics(trace)


def _run_metrics(config: ScenarioConfig):
    return run(config)[1]


def run_replications(
    config: ScenarioConfig,
    n: int,
    base_seed: int | None = None,
    n_jobs: int = 1,
) -> list:
    """``n`` runs with seeds ``base_seed + i``; result order follows ``i``."""
    if n < 1:
        raise ConfigError("n must be at least 1")
    base = config.seed if base_seed is None else int(base_seed)
    configs = [_reseed(config, base + i) for i in range(n)]
    if n_jobs == 1 or n == 1:
        return [_run_metrics(c) for c in configs]
    with ProcessPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(_run_metrics, configs))


def _reseed(config: ScenarioConfig, seed: int) -> ScenarioConfig:
    from dataclasses import replace

    return replace(config, seed=seed % 2**64)


def with_cap(config: ScenarioConfig, cap: AutonomyLevel | None) -> ScenarioConfig:
    from dataclasses import replace

    return replace(config, autonomy_cap=cap)
