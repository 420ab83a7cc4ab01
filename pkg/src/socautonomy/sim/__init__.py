"""Discrete-event SOC simulation."""

from .config import (
    AiAgentProfile,
    ClassMix,
    LogNormal,
    ScenarioConfig,
    Thresholds,
    TierPool,
    load_scenario,
    load_shipped_scenario,
    parse_scenario,
    scenario_from_dict,
    scenario_to_dict,
)
from .engine import EventTrace, Simulation, Streams, generate_alerts, run, run_replications, with_cap

__all__ = [
    "AiAgentProfile",
    "ClassMix",
    "EventTrace",
    "LogNormal",
    "ScenarioConfig",
    "Simulation",
    "Streams",
    "Thresholds",
    "TierPool",
    "generate_alerts",
    "load_scenario",
    "load_shipped_scenario",
    "parse_scenario",
    "run",
    "run_replications",
    "scenario_from_dict",
    "scenario_to_dict",
    "with_cap",
]
