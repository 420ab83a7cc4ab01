"""Scenario configuration: schema, defaults and validation."""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

import yaml

from ..catalog import Catalog, Tier, catalog_from_dict, load_catalog, lookup, seed_default_catalog
from ..errors import ConfigError, SocAutonomyError
from ..policy import AutonomyLevel, WeightConfig
from ..workflow import (
    DEFAULT_APPROVAL_TIMEOUT,
    DEFAULT_CORRELATION_WINDOW,
    DEFAULT_DISMISS_THRESHOLD,
    DEFAULT_TICKET_SEVERITY,
    ActionKind,
    RiskClass,
)

SCHEMA_VERSION = 1
PHASES = ("validation", "investigation", "containment", "approval", "recovery")
N_LEVELS = 5


@dataclass(frozen=True)
class LogNormal:
    """Lognormal duration parameterised by its mean (seconds) and log-sd."""

    mean: float
    sigma: float = 0.5

    def __post_init__(self) -> None:
        if not self.mean > 0:
            raise ConfigError(f"duration mean must be positive, got {self.mean!r}")
        if self.sigma < 0:
            raise ConfigError(f"sigma must be non-negative, got {self.sigma!r}")

    @classmethod
    def parse(cls, data: Any) -> LogNormal:
        if isinstance(data, LogNormal):
            return data
        if isinstance(data, (int, float)):
            return cls(float(data))
        if isinstance(data, Mapping):
            return cls(float(data["mean"]), float(data.get("sigma", 0.5)))
        raise ConfigError(f"cannot read a duration from {data!r}")

    def to_dict(self) -> dict:
        return {"mean": self.mean, "sigma": self.sigma}


def _unit(x: Any, name: str) -> float:
    try:
        v = float(x)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be a number") from None
    if not 0.0 <= v <= 1.0:
        raise ConfigError(f"{name}={v!r} outside [0, 1]")
    return v


def _range(x: Any, name: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in x)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be a [lo, hi] pair") from None
    _unit(lo, name)
    _unit(hi, name)
    if lo > hi:
        raise ConfigError(f"{name}: lo > hi")
    return lo, hi


def _factors(x: Any, name: str) -> tuple[float, ...]:
    vals = tuple(float(v) for v in x)
    if len(vals) != N_LEVELS or any(v <= 0 for v in vals):
        raise ConfigError(f"{name} needs {N_LEVELS} positive per-level factors")
    return vals


@dataclass(frozen=True)
class AiAgentProfile:
    """Behavioural model of the AI triage/response agent.

    ``assist`` divides human (and, at L4, AI) phase durations by a per-level
    speed-up factor, indexed L0..L4.
    """

    agent_id: str = "ai-agent"
    true_positive_rate: float = 0.9
    false_positive_rate: float = 0.1
    confidence_correct: tuple[float, float] = (0.8, 1.0)
    confidence_incorrect: tuple[float, float] = (0.5, 0.9)
    explainability: float = 0.7
    triage_latency: LogNormal = LogNormal(30.0, 0.5)
    action_latency: LogNormal = LogNormal(60.0, 0.5)
    assist: Mapping[str, tuple[float, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        _unit(self.true_positive_rate, "true_positive_rate")
        _unit(self.false_positive_rate, "false_positive_rate")
        _unit(self.explainability, "explainability")
        for phase in self.assist:
            if phase not in PHASES:
                raise ConfigError(f"unknown assist phase {phase!r}")

    def speedup(self, phase: str, level: int) -> float:
        factors = self.assist.get(phase)
        return 1.0 if factors is None else factors[level]

    @classmethod
    def from_dict(cls, data: Mapping | None) -> AiAgentProfile:
        data = dict(data or {})
        conf = data.pop("confidence_model", {}) or {}
        profile = cls(
            agent_id=str(data.pop("agent_id", "ai-agent")),
            true_positive_rate=_unit(data.pop("true_positive_rate", 0.9), "true_positive_rate"),
            false_positive_rate=_unit(data.pop("false_positive_rate", 0.1), "false_positive_rate"),
            confidence_correct=_range(conf.get("correct", (0.8, 1.0)), "confidence_model.correct"),
            confidence_incorrect=_range(conf.get("incorrect", (0.5, 0.9)), "confidence_model.incorrect"),
            explainability=_unit(data.pop("explainability", 0.7), "explainability"),
            triage_latency=LogNormal.parse(data.pop("triage_latency", {"mean": 30.0})),
            action_latency=LogNormal.parse(data.pop("action_latency", {"mean": 60.0})),
            assist={k: _factors(v, f"assist.{k}") for k, v in (data.pop("assist", {}) or {}).items()},
        )
        if data:
            raise ConfigError(f"unknown ai_profile keys: {sorted(data)}")
        return profile

    def to_dict(self) -> dict:
        return {
            "agent_id": self.agent_id,
            "true_positive_rate": self.true_positive_rate,
            "false_positive_rate": self.false_positive_rate,
            "confidence_model": {
                "correct": list(self.confidence_correct),
                "incorrect": list(self.confidence_incorrect),
            },
            "explainability": self.explainability,
            "triage_latency": self.triage_latency.to_dict(),
            "action_latency": self.action_latency.to_dict(),
            "assist": {k: list(v) for k, v in self.assist.items()},
        }


@dataclass(frozen=True)
class TierPool:
    count: int
    service: Mapping[str, LogNormal]


@dataclass(frozen=True)
class ClassMix:
    """How one task class shows up in a scenario."""

    class_id: str
    arrival_rate: float  # alerts per hour
    malicious_fraction: float
    action: ActionKind = ActionKind.RUN_PLAYBOOK
    action_risk: RiskClass = RiskClass.LOW
    recovery: bool = True

    @classmethod
    def from_dict(cls, class_id: str, data: Mapping) -> ClassMix:
        data = dict(data)
        rate = float(data.pop("arrival_rate"))
        if rate < 0:
            raise ConfigError(f"{class_id}: arrival_rate must be non-negative")
        try:
            mix = cls(
                class_id=class_id,
                arrival_rate=rate,
                malicious_fraction=_unit(data.pop("malicious_fraction"), f"{class_id}.malicious_fraction"),
                action=ActionKind(data.pop("action", "RunPlaybook")),
                action_risk=RiskClass.parse(data.pop("action_risk", "Low")),
                recovery=bool(data.pop("recovery", True)),
            )
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"{class_id}: {exc}") from None
        if data:
            raise ConfigError(f"{class_id}: unknown keys {sorted(data)}")
        return mix

    def to_dict(self) -> dict:
        return {
            "arrival_rate": self.arrival_rate,
            "malicious_fraction": self.malicious_fraction,
            "action": self.action.value,
            "action_risk": self.action_risk.name.capitalize(),
            "recovery": self.recovery,
        }


@dataclass(frozen=True)
class Thresholds:
    dismiss: float = DEFAULT_DISMISS_THRESHOLD
    ticket_severity: float = DEFAULT_TICKET_SEVERITY
    approval_timeout: float = DEFAULT_APPROVAL_TIMEOUT
    correlation_window: float = DEFAULT_CORRELATION_WINDOW


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    duration: float
    classes: tuple[ClassMix, ...]
    ai_profile: AiAgentProfile
    analyst_pool: Mapping[Tier, TierPool]
    weights: WeightConfig = WeightConfig()
    thresholds: Thresholds = Thresholds()
    autonomy_cap: AutonomyLevel | None = None
    seed: int = 0
    severity_malicious: tuple[float, float] = (0.4, 1.0)
    severity_benign: tuple[float, float] = (0.0, 0.8)
    ewma_rate: float = 0.1
    initial_performance: float = 0.5
    initial_uncertainty: float = 0.5
    learning_delta: float = 0.0
    ambiguity_rate: float = 0.0
    catalog: Catalog = field(default_factory=seed_default_catalog)
    raw: Mapping = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.duration > 0:
            raise ConfigError("duration must be positive")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if not self.classes:
            raise ConfigError("scenario needs at least one task class")
        ids = [c.class_id for c in self.classes]
        if len(set(ids)) != len(ids):
            raise ConfigError("duplicate class in scenario mix")
        for c in self.classes:
            try:
                lookup(self.catalog, c.class_id)
            except SocAutonomyError:
                raise ConfigError(f"scenario references unknown task class {c.class_id!r}") from None
        t1 = self.analyst_pool.get(Tier.TIER1)
        if t1 is None or t1.count < 1:
            raise ConfigError("at least one Tier1 analyst is required")
        if not 0 < self.ewma_rate <= 1:
            raise ConfigError("ewma_rate must be in (0, 1]")
        _unit(self.initial_performance, "initial_trust.performance_history")
        _unit(self.initial_uncertainty, "initial_trust.uncertainty")
        _unit(self.ambiguity_rate, "ambiguity_rate")
        if not 0 <= self.learning_delta <= 1:
            raise ConfigError("learning_delta must be in [0, 1]")
        _unit(self.thresholds.dismiss, "thresholds.dismiss")
        _unit(self.thresholds.ticket_severity, "thresholds.ticket_severity")
        if self.thresholds.approval_timeout <= 0 or self.thresholds.correlation_window < 0:
            raise ConfigError("approval_timeout must be positive, correlation_window non-negative")
        for tier, pool in self.analyst_pool.items():
            if pool.count < 0:
                raise ConfigError(f"{tier.label}: negative analyst count")
        staffed = [t for t, p in self.analyst_pool.items() if p.count > 0]
        for phase in PHASES:
            if not any(phase in self.analyst_pool[t].service for t in staffed):
                raise ConfigError(f"no staffed tier defines a service time for {phase!r}")

    def service(self, tier: Tier, phase: str) -> LogNormal:
        pool = self.analyst_pool.get(tier)
        if pool is not None and phase in pool.service:
            return pool.service[phase]
        for t in sorted(self.analyst_pool, key=lambda t: t.value):
            if phase in self.analyst_pool[t].service:
                return self.analyst_pool[t].service[phase]
        raise ConfigError(f"no service time for {phase!r}")  # pragma: no cover

    def with_overrides(self, **changes: Any) -> ScenarioConfig:
        """Rebuild from the raw document with dotted-key overrides applied."""
        doc = copy.deepcopy(dict(self.raw)) if self.raw else scenario_to_dict(self)
        for key, value in changes.items():
            set_dotted(doc, key, value)
        return scenario_from_dict(doc, catalog=self.catalog)


def set_dotted(doc: dict, key: str, value: Any) -> None:
    parts = key.replace("__", ".").split(".")
    node = doc
    for p in parts[:-1]:
        if p not in node or not isinstance(node[p], dict):
            node[p] = {}
        node = node[p]
    node[parts[-1]] = value


def parse_cap(value: Any) -> AutonomyLevel | None:
    if value is None:
        return None
    text = str(value).strip().upper()
    if text in ("", "NONE", "NULL"):
        return None
    text = text.lstrip("L")
    try:
        return AutonomyLevel(int(text))
    except ValueError:
        raise ConfigError(f"invalid autonomy_cap {value!r}") from None


def scenario_from_dict(data: Mapping, catalog: Catalog | None = None, base_dir: Path | None = None) -> ScenarioConfig:
    if not isinstance(data, Mapping):
        raise ConfigError("scenario document must be a mapping")
    doc = copy.deepcopy(dict(data))
    raw = copy.deepcopy(doc)
    version = doc.pop("schema_version", None)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported scenario schema_version {version!r}")
    kind = doc.pop("kind", "scenario")
    if kind != "scenario":
        raise ConfigError(f"expected kind 'scenario', got {kind!r}")

    cat_spec = doc.pop("catalog", None)
    if catalog is None:
        if cat_spec is None:
            catalog = seed_default_catalog()
        elif isinstance(cat_spec, str):
            path = Path(cat_spec)
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            catalog = load_catalog(path)
        elif isinstance(cat_spec, Mapping):
            catalog = catalog_from_dict(cat_spec)
        else:
            raise ConfigError("catalog must be a path or an inline catalog document")

    try:
        classes_doc = doc.pop("classes")
        pool_doc = doc.pop("analyst_pool")
        name = str(doc.pop("name"))
        duration = float(doc.pop("duration"))
    except KeyError as exc:
        raise ConfigError(f"scenario missing required field {exc.args[0]!r}") from None
    if not isinstance(classes_doc, Mapping) or not isinstance(pool_doc, Mapping):
        raise ConfigError("classes and analyst_pool must be mappings")

    classes = tuple(ClassMix.from_dict(cid, spec) for cid, spec in classes_doc.items())
    shared = {k: LogNormal.parse(v) for k, v in (pool_doc.get("service") or {}).items()}
    pool: dict[Tier, TierPool] = {}
    for key, spec in pool_doc.items():
        if key == "service":
            continue
        tier = Tier.parse(key)
        spec = dict(spec or {})
        own = {k: LogNormal.parse(v) for k, v in (spec.pop("service", {}) or {}).items()}
        unknown = set(own) - set(PHASES)
        if unknown:
            raise ConfigError(f"{tier.label}: unknown service phases {sorted(unknown)}")
        pool[tier] = TierPool(int(spec.pop("count", 0)), {**shared, **own})
        if spec:
            raise ConfigError(f"{tier.label}: unknown keys {sorted(spec)}")

    th = dict(doc.pop("thresholds", {}) or {})
    thresholds = Thresholds(
        dismiss=float(th.pop("dismiss", DEFAULT_DISMISS_THRESHOLD)),
        ticket_severity=float(th.pop("ticket_severity", DEFAULT_TICKET_SEVERITY)),
        approval_timeout=float(th.pop("approval_timeout", DEFAULT_APPROVAL_TIMEOUT)),
        correlation_window=float(th.pop("correlation_window", DEFAULT_CORRELATION_WINDOW)),
    )
    if th:
        raise ConfigError(f"unknown threshold keys {sorted(th)}")
    sev = dict(doc.pop("severity", {}) or {})
    init = dict(doc.pop("initial_trust", {}) or {})
    try:
        weights = WeightConfig.from_dict(doc.pop("weights", None))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    try:
        seed = int(doc.pop("seed", 0))
    except (TypeError, ValueError):
        raise ConfigError("seed must be an integer") from None
    cfg = ScenarioConfig(
        name=name,
        duration=duration,
        classes=classes,
        ai_profile=AiAgentProfile.from_dict(doc.pop("ai_profile", None)),
        analyst_pool=pool,
        weights=weights,
        thresholds=thresholds,
        autonomy_cap=parse_cap(doc.pop("autonomy_cap", None)),
        seed=seed,
        severity_malicious=_range(sev.get("malicious", (0.4, 1.0)), "severity.malicious"),
        severity_benign=_range(sev.get("benign", (0.0, 0.8)), "severity.benign"),
        ewma_rate=float(doc.pop("ewma_rate", 0.1)),
        initial_performance=float(init.get("performance_history", 0.5)),
        initial_uncertainty=float(init.get("uncertainty", 0.5)),
        learning_delta=float(doc.pop("learning_delta", 0.0)),
        ambiguity_rate=float(doc.pop("ambiguity_rate", 0.0)),
        catalog=catalog,
        raw=raw,
    )
    doc.pop("description", None)
    if doc:
        raise ConfigError(f"unknown scenario keys {sorted(doc)}")
    return cfg


def scenario_to_dict(cfg: ScenarioConfig) -> dict:
    pool: dict[str, Any] = {}
    for tier in sorted(cfg.analyst_pool, key=lambda t: t.value):
        p = cfg.analyst_pool[tier]
        pool[tier.label] = {"count": p.count, "service": {k: v.to_dict() for k, v in p.service.items()}}
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "scenario",
        "name": cfg.name,
        "duration": cfg.duration,
        "seed": cfg.seed,
        "autonomy_cap": None if cfg.autonomy_cap is None else f"L{int(cfg.autonomy_cap)}",
        "weights": cfg.weights.to_dict(),
        "thresholds": {
            "dismiss": cfg.thresholds.dismiss,
            "ticket_severity": cfg.thresholds.ticket_severity,
            "approval_timeout": cfg.thresholds.approval_timeout,
            "correlation_window": cfg.thresholds.correlation_window,
        },
        "ewma_rate": cfg.ewma_rate,
        "initial_trust": {
            "performance_history": cfg.initial_performance,
            "uncertainty": cfg.initial_uncertainty,
        },
        "learning_delta": cfg.learning_delta,
        "ambiguity_rate": cfg.ambiguity_rate,
        "severity": {"malicious": list(cfg.severity_malicious), "benign": list(cfg.severity_benign)},
        "classes": {c.class_id: c.to_dict() for c in cfg.classes},
        "ai_profile": cfg.ai_profile.to_dict(),
        "analyst_pool": pool,
    }


def parse_scenario(text: str, base_dir: Path | None = None) -> ScenarioConfig:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"scenario is not valid YAML: {exc}") from None
    return scenario_from_dict(data, base_dir=base_dir)


def load_scenario(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read scenario {path}: {exc}") from None
    return parse_scenario(text, base_dir=path.parent)


def shipped_scenario_path(name: str) -> Path:
    path = Path(__file__).resolve().parent.parent / "scenarios" / f"{name}.yaml"
    if not path.exists():
        raise ConfigError(f"no shipped scenario named {name!r}")
    return path


def load_shipped_scenario(name: str) -> ScenarioConfig:
    return load_scenario(shipped_scenario_path(name))
