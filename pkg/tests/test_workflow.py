import time

import pytest

from socautonomy.catalog import Tier
from socautonomy.errors import InvalidStateError, InvalidTransitionError, SocAutonomyError
from socautonomy.policy import AutonomyLevel, TriadicDecision, TrustBand, hitl_mode_for
from socautonomy.workflow import (
    EDGES,
    GATING_MATRIX,
    ActionKind,
    Actor,
    AgentOutputs,
    AlertEvent,
    Executor,
    GroundTruth,
    ResponseAction,
    RiskClass,
    Signal,
    Verdict,
    WorkflowState as S,
    escalate,
    gate_action,
    model_check,
    open_ticket,
    requires_audit,
    route_alert,
    step_workflow,
)

B, M = GroundTruth.BENIGN, GroundTruth.MALICIOUS


def at(level, delegation=True):
    lv = AutonomyLevel(level)
    return TriadicDecision(0.5, 0.5, 0.5, lv, hitl_mode_for(lv), TrustBand.MEDIUM, delegation)


def alert(gt=B, sev=0.5, conf=0.0, label=None, state=S.INGESTED):
    return AlertEvent("A1", 0.0, "alert-triage", gt, sev, conf, label, state)


def act(risk, kind=ActionKind.RUN_PLAYBOOK):
    return ResponseAction("R1", kind, risk)


class TestRoute:
    def test_l1_goes_to_validation(self):
        a = alert(label=B, conf=0.99, state=S.AI_TRIAGED)
        assert route_alert(a, at(1)).dst is S.AWAITING_HUMAN_VALIDATION

    def test_l2_confident_benign_dismissed(self):
        a = alert(label=B, conf=0.97, state=S.AI_TRIAGED)
        assert route_alert(a, at(2), dismiss_threshold=0.95).dst is S.AUTO_DISMISSED

    def test_l2_unsure_benign_validated(self):
        a = alert(label=B, conf=0.94, state=S.AI_TRIAGED)
        assert route_alert(a, at(2), dismiss_threshold=0.95).dst is S.AWAITING_HUMAN_VALIDATION

    def test_l3_severe_malicious_ticketed(self):
        a = alert(M, sev=0.9, label=M, conf=0.9, state=S.AI_TRIAGED)
        assert route_alert(a, at(3)).dst is S.TICKET_OPENED

    def test_l4_follows_ai_label(self):
        assert route_alert(alert(label=B, conf=0.5, state=S.AI_TRIAGED), at(4)).dst is S.AUTO_DISMISSED
        assert route_alert(alert(label=M, conf=0.5, state=S.AI_TRIAGED), at(4)).dst is S.TICKET_OPENED

    def test_l0_manual(self):
        tr = route_alert(alert(), at(0))
        assert tr.dst is S.AWAITING_HUMAN_VALIDATION and tr.actor is Actor.SYSTEM

    def test_refused_delegation_behaves_like_l1(self):
        a = alert(label=B, conf=0.99, state=S.AI_TRIAGED)
        assert route_alert(a, at(4, delegation=False)).dst is S.AWAITING_HUMAN_VALIDATION

    def test_terminal(self):
        with pytest.raises(InvalidStateError):
            route_alert(alert(state=S.CLOSED), at(2))


class TestGate:
    def test_examples(self):
        assert gate_action(act(RiskClass.LOW), at(3)) is Verdict.EXECUTE_AUTONOMOUSLY
        assert gate_action(act(RiskClass.MODERATE, ActionKind.ISOLATE_HOST), at(2)) is Verdict.REQUIRE_APPROVAL
        assert gate_action(act(RiskClass.HIGH, ActionKind.RESTORE_SYSTEM), at(4)) is Verdict.EXECUTE_AUTONOMOUSLY
        assert requires_audit(at(4)) and not requires_audit(at(3))

    def test_matrix(self):
        E, A, H = Verdict.EXECUTE_AUTONOMOUSLY, Verdict.REQUIRE_APPROVAL, Verdict.HUMAN_ONLY
        expected = {0: (H, H, H), 1: (A, A, A), 2: (E, A, H), 3: (E, E, A), 4: (E, E, E)}
        for level, row in expected.items():
            assert tuple(GATING_MATRIX[AutonomyLevel(level)][r] for r in RiskClass) == row

    def test_autonomous_execution_never_revoked_by_higher_level(self):
        for r in RiskClass:
            col = [GATING_MATRIX[lv][r] is Verdict.EXECUTE_AUTONOMOUSLY for lv in AutonomyLevel]
            assert col == sorted(col)


class TestEscalate:
    def test_next_tier(self):
        a = alert(M, state=S.UNDER_INVESTIGATION)
        esc = escalate(a, Tier.TIER2, "ambiguous")
        assert esc.target_tier is Tier.TIER3 and a.state is S.ESCALATED
        assert a.escalated_from is S.UNDER_INVESTIGATION

    def test_ceiling(self):
        assert escalate(alert(state=S.TICKET_OPENED), Tier.TIER4, "x").target_tier is Tier.TIER4

    def test_terminal(self):
        with pytest.raises(InvalidStateError):
            escalate(alert(state=S.CLOSED), Tier.TIER1, "x")


class TestTicket:
    def test_ai_ticket(self):
        a = alert(M, state=S.AI_TRIAGED)
        t = open_ticket([a], Actor.AI, 10.0)
        assert t.opened_by is Actor.AI and a.state is S.TICKET_OPENED and a.ticket_id == t.ticket_id

    def test_human_ticket(self):
        t = open_ticket([alert(M, state=S.AWAITING_HUMAN_VALIDATION)], Actor.HUMAN, 0.0)
        assert t.opened_by is Actor.HUMAN

    def test_empty(self):
        with pytest.raises(SocAutonomyError):
            open_ticket([], Actor.AI, 0.0)

    def test_resolve_before_open(self):
        t = open_ticket([alert(M, state=S.AI_TRIAGED)], Actor.AI, 100.0)
        with pytest.raises(ValueError):
            t.resolve(50.0, None)


class TestStep:
    def test_approval_path(self):
        a = alert(M, state=S.UNDER_INVESTIGATION)
        d = at(2)
        r = step_workflow(a, d, AgentOutputs(Signal.INVESTIGATION_DONE, M, act(RiskClass.MODERATE)), 1.0)
        assert r.state is S.AWAITING_APPROVAL and a.action.requires_approval
        r = step_workflow(a, d, AgentOutputs(Signal.APPROVED), 2.0)
        assert r.state is S.ACTION_EXECUTED
        assert a.action.executed_by is Executor.AI_WITH_APPROVAL

    def test_root_cause_contains_at_l3(self):
        a = alert(M, state=S.UNDER_INVESTIGATION)
        r = step_workflow(a, at(3), AgentOutputs(Signal.INVESTIGATION_DONE, M, act(RiskClass.LOW)), 1.0)
        assert r.state is S.CONTAINED
        assert [e.transition for e in r.events] == ["UnderInvestigation->Contained", "action"]

    def test_l4_emits_audit(self):
        a = alert(M, state=S.UNDER_INVESTIGATION)
        r = step_workflow(a, at(4), AgentOutputs(Signal.INVESTIGATION_DONE, M, act(RiskClass.HIGH)), 1.0)
        assert "audit" in [e.transition for e in r.events]

    def test_high_risk_at_l2_is_human(self):
        a = alert(M, state=S.UNDER_INVESTIGATION)
        r = step_workflow(a, at(2), AgentOutputs(Signal.INVESTIGATION_DONE, M, act(RiskClass.HIGH)), 1.0)
        assert r.state is S.ACTION_EXECUTED and a.action.executed_by is Executor.HUMAN

    def test_approval_without_gate_rejected(self):
        a = alert(M, state=S.UNDER_INVESTIGATION)
        step_workflow(a, at(3), AgentOutputs(Signal.INVESTIGATION_DONE, M, act(RiskClass.HIGH)), 1.0)
        a.approval_seen = False
        with pytest.raises(InvalidTransitionError):
            step_workflow(a, at(3), AgentOutputs(Signal.APPROVED), 2.0)

    @pytest.mark.parametrize("sig", list(Signal))
    def test_closed_absorbs(self, sig):
        with pytest.raises(InvalidTransitionError):
            step_workflow(alert(state=S.CLOSED), at(2), AgentOutputs(sig, M, act(RiskClass.LOW)), 0.0)

    def test_full_manual_path(self):
        a = alert(M, sev=0.9)
        d = at(0)
        seq = [
            (AgentOutputs(Signal.TRIAGE), S.AWAITING_HUMAN_VALIDATION),
            (AgentOutputs(Signal.VALIDATED, M), S.TICKET_OPENED),
            (AgentOutputs(Signal.START_INVESTIGATION), S.UNDER_INVESTIGATION),
            (AgentOutputs(Signal.INVESTIGATION_DONE, M, act(RiskClass.LOW)), S.ACTION_EXECUTED),
            (AgentOutputs(Signal.CONTAINMENT_DONE), S.CONTAINED),
            (AgentOutputs(Signal.RECOVERY_DONE), S.RECOVERED),
            (AgentOutputs(Signal.CLOSE), S.CLOSED),
        ]
        for t, (out, want) in enumerate(seq):
            r = step_workflow(a, d, out, float(t))
            assert r.state is want
            assert all(e.actor != "Ai" for e in r.events)

    def test_timeout_escalates_then_approves(self):
        a = alert(M, state=S.UNDER_INVESTIGATION)
        d = at(1)
        step_workflow(a, d, AgentOutputs(Signal.INVESTIGATION_DONE, M, act(RiskClass.LOW)), 0.0)
        r = step_workflow(a, d, AgentOutputs(Signal.APPROVAL_TIMEOUT, tier=Tier.TIER2), 1800.0)
        assert r.state is S.ESCALATED and r.events[0].extra["target_tier"] == "Tier3"
        assert step_workflow(a, d, AgentOutputs(Signal.APPROVED), 1900.0).state is S.ACTION_EXECUTED


def test_model_check():
    t0 = time.perf_counter()
    report = model_check()
    elapsed = time.perf_counter() - t0
    assert report.ok, report.violations[:5]
    assert report.configurations < 100_000
    assert len(report.pairs_checked) == 15
    assert elapsed < 5.0


def test_no_edges_out_of_terminals():
    for src, _ in EDGES:
        assert not src.terminal
