"""Trust-gated autonomy for AI-assisted security operations.

The core model lives in :mod:`socautonomy.policy`; task classes in
:mod:`socautonomy.catalog`; trust ledgers in :mod:`socautonomy.trust`; the
alert/ticket state machine in :mod:`socautonomy.workflow`; the simulator in
:mod:`socautonomy.sim`; metrics and reports in :mod:`socautonomy.metrics`.
"""

from .catalog import Catalog, TaskProfile, Tier, lookup, register, seed_default_catalog
from .policy import (
    AutonomyLevel,
    HitlMode,
    TriadicDecision,
    TrustBand,
    TrustState,
    WeightConfig,
    band_autonomy,
    compute_autonomy,
    compute_hitl,
    compute_trust,
    hitl_mode_for,
    triadic_decision,
)
from .trust import Outcome, OutcomeKind, TrustLedger, current_trust, record_outcome, trust_trajectory

__version__ = "0.1.0"

__all__ = [
    "AutonomyLevel",
    "Catalog",
    "HitlMode",
    "Outcome",
    "OutcomeKind",
    "TaskProfile",
    "Tier",
    "TriadicDecision",
    "TrustBand",
    "TrustLedger",
    "TrustState",
    "WeightConfig",
    "band_autonomy",
    "compute_autonomy",
    "compute_hitl",
    "compute_trust",
    "current_trust",
    "hitl_mode_for",
    "lookup",
    "record_outcome",
    "register",
    "seed_default_catalog",
    "triadic_decision",
    "trust_trajectory",
]
