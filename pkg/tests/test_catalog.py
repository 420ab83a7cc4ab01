import pickle

import pytest

from socautonomy.catalog import (
    Catalog,
    NistFunction,
    SocFunction,
    TaskProfile,
    Tier,
    catalog_from_dict,
    catalog_to_dict,
    dump_catalog,
    load_catalog,
    lookup,
    parse_catalog,
    register,
    save_catalog,
    seed_default_catalog,
)
from socautonomy.errors import ConfigError, DomainError, DuplicateTaskClassError, UnknownTaskClassError
from socautonomy.policy import TrustBand


def custom(**kw):
    base = dict(class_id="custom-task", complexity=0.4, risk=0.3, tier=Tier.TIER2,
                nist_function=NistFunction.DETECT, required_trust=TrustBand.MEDIUM,
                soc_function=SocFunction.THREAT_MANAGEMENT)
    base.update(kw)
    return TaskProfile(**base)


def test_seeded_entries():
    cat = seed_default_catalog()
    assert len(cat) >= 10
    zd = lookup(cat, "investigate-zero-day")
    assert zd.tier is Tier.TIER3 and zd.complexity == 0.95
    assert zd.required_trust is TrustBand.LOW and not zd.delegable
    assert lookup(cat, "block-known-malicious-ip").required_trust is TrustBand.HIGH
    patch = lookup(cat, "auto-patching")
    assert patch.delegable and patch.complexity <= 0.2


def test_tier_pairing_holds_for_defaults():
    allowed = {
        Tier.TIER1: {"Identify", "Protect"},
        Tier.TIER2: {"Detect", "Respond"},
        Tier.TIER3: {"Detect", "Recover"},
        Tier.TIER4: {"Recover"},
    }
    for p in seed_default_catalog():
        assert p.nist_function.value in allowed[p.tier]


def test_lookup_missing():
    with pytest.raises(UnknownTaskClassError):
        lookup(seed_default_catalog(), "nonexistent")


def test_register_round_trip_and_immutability():
    cat = seed_default_catalog()
    new = register(cat, custom())
    assert lookup(new, "custom-task").risk == 0.3
    assert "custom-task" not in cat


def test_register_duplicate():
    cat = register(Catalog(), custom())
    with pytest.raises(DuplicateTaskClassError):
        register(cat, custom())


def test_register_out_of_range():
    with pytest.raises(DomainError):
        register(Catalog(), custom(complexity=1.2))


def test_bad_pairing():
    with pytest.raises(DomainError):
        custom(tier=Tier.TIER1, nist_function=NistFunction.RECOVER)


def test_tier4_not_delegable():
    with pytest.raises(DomainError):
        custom(tier=Tier.TIER4, nist_function=NistFunction.RECOVER, delegable=True)


def test_tier_parse_and_cap():
    assert Tier.parse("Tier3") is Tier.TIER3
    assert Tier.parse(2) is Tier.TIER2
    assert Tier.TIER4.next_up() is Tier.TIER4
    with pytest.raises(DomainError):
        Tier.parse("Tier9")


def test_yaml_round_trip(tmp_path):
    cat = seed_default_catalog()
    assert parse_catalog(dump_catalog(cat)) == cat
    path = tmp_path / "catalog.yaml"
    save_catalog(cat, path)
    assert load_catalog(path) == cat
    assert pickle.loads(pickle.dumps(cat)) == cat


def test_schema_version_required():
    doc = catalog_to_dict(seed_default_catalog())
    doc["schema_version"] = 2
    with pytest.raises(ConfigError):
        catalog_from_dict(doc)


def test_missing_field_and_duplicate_in_file():
    doc = catalog_to_dict(seed_default_catalog())
    bad = dict(doc, classes=[{k: v for k, v in doc["classes"][0].items() if k != "risk"}])
    with pytest.raises(ConfigError, match="risk"):
        catalog_from_dict(bad)
    dup = dict(doc, classes=doc["classes"][:1] * 2)
    with pytest.raises(ConfigError):
        catalog_from_dict(dup)


def test_invalid_yaml_and_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        parse_catalog("classes: [")
    with pytest.raises(ConfigError):
        load_catalog(tmp_path / "absent.yaml")
