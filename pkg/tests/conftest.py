"""Shared scenario builders for the harness tests."""

from __future__ import annotations

import copy

import pytest
import yaml

TR_GAINS = {"B": 4.0, "K": 20.0, "H": 0.5, "F1": 8.0, "F2": 16.0, "F": 30.0}
ROT_GAINS = {"B": 40.0, "K": 900.0, "H": 0.1, "F1": 80.0, "F2": 200.0, "F": 300.0}
SMC_TR = {"lambda": 2.0, "eta": 5.0, "boundary_layer": 0.0, "F": 30.0, "H": 0.5}
SMC_ROT = {"lambda": 20.0, "eta": 50.0, "boundary_layer": 0.0, "F": 300.0, "H": 0.1}

BASE_MAPPING = {
    "name": "unit-hover",
    "duration": 4.0,
    "h": 5e-3,
    "plant": {"m": 2.0, "J": [0.1, 0.2, 0.3], "d": 0.17, "k_b": 1e-5, "k_d": 1e-6},
    "initial": {"p": [0.0, 0.0, 0.2]},
    "reference": {"kind": "setpoint", "position": [0.0, 0.0, 0.0]},
    "controller": "psta",
    "gains": {
        "psta": {
            "translation": {a: dict(TR_GAINS) for a in ("x", "y", "z")},
            "rotation": {a: dict(ROT_GAINS) for a in ("roll", "pitch", "yaw")},
        },
        "smc": {
            "translation": {a: dict(SMC_TR) for a in ("x", "y", "z")},
            "rotation": {a: dict(SMC_ROT) for a in ("roll", "pitch", "yaw")},
        },
    },
}


def make_mapping(**overrides):
    """Deep copy of the hover scenario mapping with top-level overrides."""
    m = copy.deepcopy(BASE_MAPPING)
    m.update(overrides)
    return m


@pytest.fixture
def scenario_mapping():
    return make_mapping()


@pytest.fixture
def scenario_file(tmp_path):
    """Write a scenario mapping to YAML; returns the path factory."""

    def write(mapping, name=None):
        path = tmp_path / f"{name or mapping['name']}.yaml"
        path.write_text(yaml.safe_dump(mapping), encoding="utf-8")
        return path

    return write
