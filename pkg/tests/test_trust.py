from fractions import Fraction as F

import pytest

from oracles import FROZEN, ewma
from socautonomy.catalog import lookup, seed_default_catalog
from socautonomy.errors import DomainError, EmptyHistoryError
from socautonomy.policy import WeightConfig, band_autonomy, compute_autonomy, TrustState
from socautonomy.trust import (
    Outcome,
    OutcomeKind,
    TrustLedger,
    current_trust,
    record_outcome,
    trust_trajectory,
)

W = WeightConfig()
THIRDS = WeightConfig(alpha1=1 / 3, alpha2=1 / 3, alpha3=1 / 3)


def fresh(beta=0.1):
    return TrustLedger.fresh("ai", "alert-triage", 0.5, 0.5, 0.5, beta)


def test_single_success():
    led = record_outcome(fresh(), Outcome(OutcomeKind.CORRECT_ACTION, 1.0))
    assert led.state.performance_history == pytest.approx(float(FROZEN["ewma_P_0.5_correct"]))
    assert led.interaction_count == 1


def test_override_lowers_p_and_raises_u():
    led = record_outcome(fresh(), Outcome(OutcomeKind.HUMAN_OVERRIDE, 0.9))
    assert led.state.performance_history < 0.5
    assert led.state.uncertainty == pytest.approx(float(FROZEN["ewma_U_0.5_override_0.9"]))


def test_streak_converges():
    led = fresh()
    ps, us = [], []
    for _ in range(200):
        led = record_outcome(led, Outcome(OutcomeKind.CORRECT_ACTION, 1.0))
        ps.append(led.state.performance_history)
        us.append(led.state.uncertainty)
    assert ps == sorted(ps) and us == sorted(us, reverse=True)
    assert ps[-1] > 0.999 and us[-1] < 0.001
    assert led.interaction_count == 200


def test_fresh_equal_weights():
    assert current_trust(fresh(), THIRDS) == pytest.approx(0.5, abs=1e-12)


def test_limit():
    led = TrustLedger("ai", "x", TrustState(0.5, 1.0, 0.0))
    assert current_trust(led, W) == pytest.approx(0.3 * 0.5 + 0.5 + 0.2)


def test_failure_lowers_trust():
    f = fresh()
    assert current_trust(record_outcome(f, Outcome(OutcomeKind.INCORRECT_ACTION, 0.7)), W) < current_trust(f, W)


def test_outcome_consistency():
    with pytest.raises(DomainError):
        Outcome(OutcomeKind.CORRECT_ACTION, 0.9, was_correct=False)
    with pytest.raises(DomainError):
        Outcome(OutcomeKind.MISSED_THREAT, 0.9, was_correct=True)
    assert Outcome(OutcomeKind.ESCALATED_CORRECTLY, 0.5).was_correct
    assert not Outcome(OutcomeKind.HUMAN_OVERRIDE, 0.5, was_correct=True).counts_as_correct
    with pytest.raises(DomainError):
        Outcome(OutcomeKind.CORRECT_ACTION, 1.5)


def test_trajectory():
    led = fresh()
    assert len(trust_trajectory([led], W)) == 1
    with pytest.raises(EmptyHistoryError):
        trust_trajectory([], W)


def test_alternating_matches_recurrence():
    beta = 0.5
    led = fresh(beta)
    hist = [led]
    expected = []
    pf, uf = F(1, 2), F(1, 2)
    for i in range(12):
        ok = i % 2 == 0
        kind = OutcomeKind.CORRECT_ACTION if ok else OutcomeKind.INCORRECT_ACTION
        led = record_outcome(led, Outcome(kind, 0.8))
        hist.append(led)
        pf = ewma(pf, 1 if ok else 0, F(1, 2))
        uf = ewma(uf, F(1, 5) if ok else F(4, 5), F(1, 2))
        expected.append(float(F(3, 10) * F(1, 2) + F(1, 2) * pf + F(1, 5) * (1 - uf)))
    traj = trust_trajectory(hist, W)[1:]
    assert traj == pytest.approx(expected, abs=1e-12)
    diffs = [b - a for a, b in zip(traj, traj[1:])]
    assert all(d1 * d2 < 0 for d1, d2 in zip(diffs, diffs[1:]))


def test_ewma_rate_validated():
    with pytest.raises(DomainError):
        fresh(beta=0.0)


def test_to_dict():
    d = fresh().to_dict()
    assert d["n"] == 0 and d["E"] == 0.5


def test_success_stream_never_lowers_level():
    task = lookup(seed_default_catalog(), "quarantine-suspicious-malware")
    led = TrustLedger.fresh("ai", task.class_id, 0.6, 0.3, 0.7)
    levels = []
    for _ in range(100):
        t = current_trust(led, W)
        levels.append(band_autonomy(compute_autonomy(task.complexity, task.risk, t, W)))
        led = record_outcome(led, Outcome(OutcomeKind.CORRECT_ACTION, 1.0))
    assert levels == sorted(levels) and levels[-1] > levels[0]
