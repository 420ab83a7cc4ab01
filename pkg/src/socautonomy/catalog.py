"""Registry of SOC task classes and their default complexity/risk scores."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from types import MappingProxyType
from typing import Iterator, Mapping

import yaml

from .errors import ConfigError, DomainError, DuplicateTaskClassError, UnknownTaskClassError
from .policy import TrustBand, check_unit

SCHEMA_VERSION = 1


class Tier(Enum):
    TIER1 = 1
    TIER2 = 2
    TIER3 = 3
    TIER4 = 4

    @classmethod
    def parse(cls, value: str | int | Tier) -> Tier:
        if isinstance(value, Tier):
            return value
        text = str(value).strip().lower().replace("tier", "").strip()
        try:
            return cls(int(text))
        except ValueError:
            raise DomainError(f"unknown tier {value!r}") from None

    @property
    def label(self) -> str:
        return f"Tier{self.value}"

    def next_up(self) -> Tier:
        return Tier(min(self.value + 1, 4))


class NistFunction(Enum):
    IDENTIFY = "Identify"
    PROTECT = "Protect"
    DETECT = "Detect"
    RESPOND = "Respond"
    RECOVER = "Recover"


class SocFunction(Enum):
    SYSTEM_MONITORING = "SystemMonitoring"
    ALERTS_MANAGEMENT = "AlertsManagement"
    THREAT_MANAGEMENT = "ThreatManagement"
    RESPONSE_RECOVERY = "ResponseRecovery"


# Govern is out of scope, so Tier4 keeps only Recover.
TIER_FUNCTIONS = {
    Tier.TIER1: frozenset({NistFunction.IDENTIFY, NistFunction.PROTECT}),
    Tier.TIER2: frozenset({NistFunction.DETECT, NistFunction.RESPOND}),
    Tier.TIER3: frozenset({NistFunction.DETECT, NistFunction.RECOVER}),
    Tier.TIER4: frozenset({NistFunction.RECOVER}),
}


def _parse_enum(enum_cls, value, what: str):
    if isinstance(value, enum_cls):
        return value
    for member in enum_cls:
        if str(value).lower() in (member.value.lower(), member.name.lower()):
            return member
    raise DomainError(f"unknown {what} {value!r}")


@dataclass(frozen=True)
class TaskProfile:
    """One SOC task class.

    ``delegable`` is False for classes whose work must stay analyst-led no
    matter how trust evolves (high-complexity investigation, Tier4 review).
    """

    class_id: str
    complexity: float
    risk: float
    tier: Tier
    nist_function: NistFunction
    required_trust: TrustBand
    soc_function: SocFunction
    delegable: bool = True

    def __post_init__(self) -> None:
        if not self.class_id or not isinstance(self.class_id, str):
            raise DomainError("class_id must be a non-empty string")
        check_unit(self.complexity, "complexity")
        check_unit(self.risk, "risk")
        if self.nist_function not in TIER_FUNCTIONS[self.tier]:
            raise DomainError(
                f"{self.class_id}: {self.tier.label} does not own {self.nist_function.value}"
            )
        if self.tier is Tier.TIER4 and self.delegable:
            raise DomainError(f"{self.class_id}: Tier4 classes cannot be delegable")

    @classmethod
    def from_dict(cls, data: Mapping) -> TaskProfile:
        try:
            return cls(
                class_id=str(data["class_id"]),
                complexity=float(data["complexity"]),
                risk=float(data["risk"]),
                tier=Tier.parse(data["tier"]),
                nist_function=_parse_enum(NistFunction, data["nist_function"], "NIST function"),
                required_trust=TrustBand.parse(data["required_trust"]),
                soc_function=_parse_enum(SocFunction, data["soc_function"], "SOC function"),
                delegable=bool(data.get("delegable", True)),
            )
        except KeyError as exc:
            raise ConfigError(f"task class record missing field {exc.args[0]!r}") from None
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None

    def to_dict(self) -> dict:
        return {
            "class_id": self.class_id,
            "complexity": self.complexity,
            "risk": self.risk,
            "tier": self.tier.label,
            "nist_function": self.nist_function.value,
            "required_trust": self.required_trust.label,
            "soc_function": self.soc_function.value,
            "delegable": self.delegable,
        }


@dataclass(frozen=True)
class Catalog:
    entries: Mapping[str, TaskProfile] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))

    def __contains__(self, class_id: object) -> bool:
        return class_id in self.entries

    def __iter__(self) -> Iterator[TaskProfile]:
        return iter(self.entries.values())

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Catalog):
            return NotImplemented
        return dict(self.entries) == dict(other.entries)

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.entries.items())))

    def __reduce__(self):
        return (Catalog, (dict(self.entries),))

    @property
    def class_ids(self) -> list[str]:
        return list(self.entries)


def lookup(catalog: Catalog, class_id: str) -> TaskProfile:
    try:
        return catalog.entries[class_id]
    except KeyError:
        raise UnknownTaskClassError(class_id) from None


def register(catalog: Catalog, profile: TaskProfile) -> Catalog:
    """Return a new catalog with ``profile`` added."""
    if not isinstance(profile, TaskProfile):
        profile = TaskProfile.from_dict(profile)
    if profile.class_id in catalog.entries:
        raise DuplicateTaskClassError(profile.class_id)
    entries = dict(catalog.entries)
    entries[profile.class_id] = profile
    return Catalog(entries)


def _p(class_id, c, r, tier, nist, trust, soc, delegable=True) -> TaskProfile:
    return TaskProfile(
        class_id, c, r, Tier(tier), NistFunction(nist), TrustBand[trust], SocFunction(soc), delegable
    )


# C/R are calibrations against the qualitative rows of the HITL-mapping and
# triadic-mapping tables (equal lambdas assumed); tests enforce them.
_DEFAULT_PROFILES = (
    # triadic row "blocking a known malicious IP": A 0.8-1.0 at high trust
    _p("block-known-malicious-ip", 0.20, 0.30, 2, "Respond", "HIGH", "ResponseRecovery"),
    # triadic row "phishing classification": A 0.4-0.7 at medium trust
    _p("phishing-classification", 0.70, 0.65, 1, "Protect", "MEDIUM", "AlertsManagement"),
    # HITL row "quarantine suspicious malware": medium complexity, partial HITL
    _p("quarantine-suspicious-malware", 0.55, 0.60, 2, "Respond", "MEDIUM", "ResponseRecovery"),
    # triadic row "zero-day": A 0.1-0.3 at low trust; high complexity, analyst-led
    _p("investigate-zero-day", 0.95, 0.90, 3, "Detect", "LOW", "ThreatManagement", False),
    # HITL row "auto-patching": low complexity, out-of-the-loop routine
    _p("auto-patching", 0.15, 0.20, 1, "Protect", "HIGH", "SystemMonitoring"),
    _p("alert-triage", 0.35, 0.30, 1, "Identify", "MEDIUM", "AlertsManagement"),
    _p("log-correlation", 0.45, 0.30, 2, "Detect", "MEDIUM", "ThreatManagement"),
    _p("containment-action", 0.55, 0.75, 2, "Respond", "HIGH", "ResponseRecovery"),
    _p("recovery-restore", 0.60, 0.70, 3, "Recover", "HIGH", "ResponseRecovery"),
    # high complexity row: delegation refused
    _p("threat-hunt", 0.85, 0.70, 3, "Detect", "LOW", "ThreatManagement", False),
    _p("governance-review", 0.80, 0.80, 4, "Recover", "HIGH", "ResponseRecovery", False),
)


def seed_default_catalog() -> Catalog:
    return Catalog({p.class_id: p for p in _DEFAULT_PROFILES})


def catalog_to_dict(catalog: Catalog) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "catalog",
        "classes": [p.to_dict() for p in catalog],
    }


def catalog_from_dict(data: Mapping) -> Catalog:
    if not isinstance(data, Mapping):
        raise ConfigError("catalog document must be a mapping")
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported catalog schema_version {version!r}")
    records = data.get("classes")
    if not isinstance(records, list) or not records:
        raise ConfigError("catalog must list at least one class")
    catalog = Catalog()
    for record in records:
        try:
            catalog = register(catalog, TaskProfile.from_dict(record))
        except (DomainError, DuplicateTaskClassError) as exc:
            raise ConfigError(str(exc)) from None
    return catalog


def dump_catalog(catalog: Catalog) -> str:
    return yaml.safe_dump(catalog_to_dict(catalog), sort_keys=False)


def parse_catalog(text: str) -> Catalog:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"catalog is not valid YAML: {exc}") from None
    return catalog_from_dict(data)


def load_catalog(path: str | Path) -> Catalog:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read catalog {path}: {exc}") from None
    return parse_catalog(text)


def save_catalog(catalog: Catalog, path: str | Path) -> None:
    Path(path).write_text(dump_catalog(catalog), encoding="utf-8")
