import copy

import pytest

from socautonomy.sim.config import scenario_from_dict

SMALL = {
    "schema_version": 1,
    "kind": "scenario",
    "name": "small",
    "duration": 4 * 3600,
    "seed": 7,
    "classes": {
        "alert-triage": {"arrival_rate": 20, "malicious_fraction": 0.3, "action": "RunPlaybook",
                         "action_risk": "Low", "recovery": False},
        "quarantine-suspicious-malware": {"arrival_rate": 6, "malicious_fraction": 0.5, "action": "IsolateHost",
                                          "action_risk": "Moderate", "recovery": True},
        "investigate-zero-day": {"arrival_rate": 2, "malicious_fraction": 0.8, "action": "IsolateHost",
                                 "action_risk": "High", "recovery": True},
    },
    "ai_profile": {"explainability": 0.6},
    "ambiguity_rate": 0.1,
    "analyst_pool": {
        "service": {
            "validation": {"mean": 300},
            "investigation": {"mean": 1800},
            "containment": {"mean": 900},
            "approval": {"mean": 300},
            "recovery": {"mean": 1200},
        },
        "Tier1": {"count": 3},
        "Tier2": {"count": 4},
        "Tier3": {"count": 3},
        "Tier4": {"count": 1},
    },
}


def make_scenario(**overrides):
    doc = copy.deepcopy(SMALL)
    for key, value in overrides.items():
        node = doc
        parts = key.split(".")
        for p in parts[:-1]:
            node = node.setdefault(p, {})
        if value is None:
            node.pop(parts[-1], None)
        else:
            node[parts[-1]] = value
    return scenario_from_dict(doc)


@pytest.fixture
def small():
    return make_scenario()
