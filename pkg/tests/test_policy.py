import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import FROZEN
from socautonomy.catalog import lookup, seed_default_catalog
from socautonomy.errors import DomainError, WeightError
from socautonomy.policy import (
    AutonomyLevel,
    Diagnostics,
    HitlMode,
    TrustBand,
    TrustState,
    WeightConfig,
    band_autonomy,
    compute_autonomy,
    compute_hitl,
    compute_trust,
    decide,
    hitl_mode_for,
    triadic_decision,
    trust_band,
)

W = WeightConfig()
THIRDS = WeightConfig(alpha1=1 / 3, alpha2=1 / 3, alpha3=1 / 3)
unit = st.floats(0.0, 1.0, allow_nan=False)


class TestTrust:
    def test_extremes(self):
        assert compute_trust(TrustState(1, 1, 0), W) == 1.0
        assert compute_trust(TrustState(0, 0, 1), W) == 0.0

    def test_equal_weights(self):
        t = compute_trust(TrustState(0.9, 0.8, 0.3), THIRDS)
        assert t == pytest.approx(float(FROZEN["trust_equal_thirds_0.9_0.8_0.3"]), abs=1e-12)

    def test_default_weights(self):
        t = compute_trust(TrustState(0.8, 0.9, 0.2), W)
        assert t == pytest.approx(float(FROZEN["trust_default_0.8_0.9_0.2"]), abs=1e-12)

    def test_rejects_out_of_range(self):
        with pytest.raises(DomainError):
            TrustState(1.2, 0.5, 0.5)
        with pytest.raises(DomainError):
            TrustState(0.5, math.nan, 0.5)


class TestWeights:
    def test_alpha_sum_enforced(self):
        with pytest.raises(WeightError):
            WeightConfig(alpha1=0.5, alpha2=0.5, alpha3=0.5)

    def test_alpha_sum_tolerance(self):
        WeightConfig(alpha1=0.3, alpha2=0.5, alpha3=0.2 + 5e-10)
        with pytest.raises(WeightError):
            WeightConfig(alpha1=0.3, alpha2=0.5, alpha3=0.2 + 1e-8)

    def test_lambda_range(self):
        with pytest.raises(WeightError):
            WeightConfig(lambda1=-0.1)

    def test_round_trip(self):
        assert WeightConfig.from_dict(W.to_dict()) == W

    def test_unknown_key(self):
        with pytest.raises(WeightError):
            WeightConfig.from_dict({"gamma": 1})


class TestAutonomy:
    def test_maximal_penalty(self):
        assert compute_autonomy(1, 1, 0, W) == 0.0

    @pytest.mark.parametrize("c,r", [(0, 0), (1, 1), (0.3, 0.9)])
    def test_full_trust(self, c, r):
        assert compute_autonomy(c, r, 1.0, W) == 1.0

    def test_oracle(self):
        assert compute_autonomy(0.6, 0.4, 0.5, W) == pytest.approx(0.75, abs=1e-12)
        assert float(FROZEN["autonomy_0.6_0.4_0.5"]) == 0.75

    def test_clamp_counted(self):
        heavy = WeightConfig(lambda1=1.0, lambda2=1.0)
        diag = Diagnostics()
        assert compute_autonomy(1, 1, 0, heavy, diag) == 0.0
        assert diag.clamped == 1
        compute_autonomy(0.1, 0.1, 0.5, heavy, diag)
        assert diag.clamped == 1

    def test_domain(self):
        with pytest.raises(DomainError):
            compute_autonomy(1.2, 0.5, 0.5, W)


class TestHitl:
    @pytest.mark.parametrize("a,h", [(0.0, 1.0), (1.0, 0.0), (0.75, 0.25)])
    def test_complement(self, a, h):
        assert compute_hitl(a) == h

    def test_domain(self):
        with pytest.raises(DomainError):
            compute_hitl(-0.01)


class TestBanding:
    @pytest.mark.parametrize(
        "a,level",
        [
            (0.0, 0), (0.1, 0), (0.2, 1), (0.3, 1), (0.4, 2), (0.5, 2), (0.6, 2),
            (0.65, 2), (0.7, 3), (0.75, 3), (0.85, 3), (0.9, 4), (0.95, 4), (1.0, 4),
        ],
    )
    def test_points(self, a, level):
        assert band_autonomy(a) is AutonomyLevel(level)

    def test_just_below_edges(self):
        for edge, below in ((0.2, 0), (0.4, 1), (0.7, 2), (0.9, 3)):
            assert band_autonomy(math.nextafter(edge, 0)) == below

    def test_grid_total_and_monotone(self):
        levels = [band_autonomy(i / 1000) for i in range(1001)]
        assert levels == sorted(levels)
        assert set(levels) == set(AutonomyLevel)

    def test_domain(self):
        with pytest.raises(DomainError):
            band_autonomy(1.0001)


class TestModesAndBands:
    def test_mode_map(self):
        assert hitl_mode_for(AutonomyLevel.L0) is HitlMode.MANUAL
        assert hitl_mode_for(AutonomyLevel.L1) is HitlMode.FULL_HITL
        assert hitl_mode_for(AutonomyLevel.L2) is HitlMode.PARTIAL_HITL
        assert hitl_mode_for(AutonomyLevel.L3) is HitlMode.HOTL
        assert hitl_mode_for(AutonomyLevel.L4) is HitlMode.HOOTL
        assert HitlMode.HOOTL.label == "HOoTL"

    @pytest.mark.parametrize("t,band", [(0.85, TrustBand.HIGH), (0.4, TrustBand.MEDIUM),
                                        (0.1, TrustBand.LOW), (0.7, TrustBand.HIGH),
                                        (math.nextafter(0.4, 0), TrustBand.LOW)])
    def test_trust_band(self, t, band):
        assert trust_band(t) is band

    def test_trust_band_domain(self):
        with pytest.raises(DomainError):
            trust_band(2)


class TestTriadic:
    cat = seed_default_catalog()

    def _at(self, class_id, t):
        p = lookup(self.cat, class_id)
        return decide(p.complexity, p.risk, t, W, p.required_trust, p.delegable)

    def test_block_ip(self):
        d = self._at("block-known-malicious-ip", 0.9)
        assert d.autonomy == pytest.approx(float(FROZEN["block_ip_T0.90"]), abs=1e-12)
        assert d.hitl == pytest.approx(0.025, abs=1e-12)
        assert (d.level, d.mode, d.trust_band, d.delegation_allowed) == (
            AutonomyLevel.L4, HitlMode.HOOTL, TrustBand.HIGH, True)

    def test_zero_day(self):
        d = self._at("investigate-zero-day", 0.2)
        assert d.autonomy == pytest.approx(float(FROZEN["zero_day_T0.20"]), abs=1e-12)
        assert d.hitl == pytest.approx(0.74, abs=1e-12)
        assert d.level is AutonomyLevel.L1 and d.mode is HitlMode.FULL_HITL
        assert d.trust_band is TrustBand.LOW
        assert not d.delegation_allowed

    def test_phishing(self):
        d = self._at("phishing-classification", 0.55)
        assert d.autonomy == pytest.approx(float(FROZEN["phishing_T0.55"]), abs=1e-12)
        assert d.hitl == pytest.approx(0.30375, abs=1e-12)
        assert d.trust_band is TrustBand.MEDIUM and d.level is AutonomyLevel.L2

    def test_from_state(self):
        p = lookup(self.cat, "alert-triage")
        d = triadic_decision(p, TrustState(0.8, 0.9, 0.2), W)
        assert d.trust == pytest.approx(0.85)
        assert d.hitl + d.autonomy == 1.0

    def test_required_band_gates_delegation(self):
        assert not self._at("block-known-malicious-ip", 0.69).delegation_allowed
        assert self._at("block-known-malicious-ip", 0.7).delegation_allowed

    def test_refused_delegation_limits_operating_level(self):
        d = self._at("block-known-malicious-ip", 0.6)
        assert d.level >= AutonomyLevel.L3
        assert d.operating_level is AutonomyLevel.L1

    def test_capped(self):
        d = self._at("block-known-malicious-ip", 0.9)
        c = d.capped(AutonomyLevel.L0)
        assert c.level is AutonomyLevel.L0 and c.mode is HitlMode.MANUAL
        assert c.autonomy == d.autonomy
        assert d.capped(None) is d


@settings(max_examples=300, deadline=None)
@given(unit, unit, unit, unit, unit)
def test_autonomy_properties(c, r, t, l1, l2):
    w = WeightConfig(lambda1=l1, lambda2=l2)
    a = compute_autonomy(c, r, t, w)
    assert 0.0 <= a <= 1.0
    assert compute_hitl(a) + a == 1.0


@settings(max_examples=300, deadline=None)
@given(unit, unit, unit, st.floats(0, 1), st.floats(0, 1))
def test_trust_in_unit_interval(e, p, u, x, y):
    lo, hi = sorted((x, y))
    w = WeightConfig(alpha1=lo, alpha2=hi - lo, alpha3=1.0 - hi)
    assert 0.0 <= compute_trust(TrustState(e, p, u), w) <= 1.0
