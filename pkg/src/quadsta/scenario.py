"""Scenario configuration: YAML schema, validation, dot-path overrides.

A scenario file fixes everything a run needs: plant constants, initial
state, reference trajectory, disturbance profile, controller selection and
per-axis gains, loop rates and flags. Validation errors always name the
offending key so the CLI can surface them directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
import yaml

from . import so3
from .cascade import CascadeController
from .disturbance import ZERO_PROFILE, DisturbanceProfile
from .plant import QuadParams, RigidBodyState
from .reference import Trajectory, trajectory_from_mapping

CONTROLLER_KINDS = ("psta", "smc", "psmc")
_FLAG_KEYS = ("gravity_feedforward", "actuator_layer", "omega_d", "f_max")


class ScenarioError(ValueError):
    """Configuration rejected; the message names the offending key."""


def _dealias(node):
    # YAML anchors make aliased subtrees share one object; rebuild so a
    # dot-path override cannot silently edit several axes at once.
    if isinstance(node, dict):
        return {k: _dealias(v) for k, v in node.items()}
    if isinstance(node, list):
        return [_dealias(v) for v in node]
    return node


def _require(mapping, key, path):
    if key not in mapping:
        raise ScenarioError(f"'{path}{key}': missing required key")
    return mapping[key]


def _number(value, path, positive=False):
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise ScenarioError(f"'{path}': expected a number, got {value!r}") from None
    if not math.isfinite(x):
        raise ScenarioError(f"'{path}': must be finite, got {value!r}")
    if positive and not (x > 0.0):
        raise ScenarioError(f"'{path}': must be positive, got {value!r}")
    return x


def _vector3(value, path):
    if not isinstance(value, (list, tuple)) or len(value) != 3:
        raise ScenarioError(f"'{path}': expected a list of 3 numbers, got {value!r}")
    return np.array([_number(v, f"{path}[{i}]") for i, v in enumerate(value)])


def apply_override(mapping, text):
    """Apply one ``dotted.key=value`` override to a nested mapping in place.

    The value is parsed as YAML (so numbers, booleans and lists work); the
    path must reach an existing mapping, only the final key may be new.
    Integer segments index into lists.
    """
    key, sep, raw = text.partition("=")
    key = key.strip()
    if not sep or not key:
        raise ScenarioError(f"override {text!r}: expected key=value")
    try:
        value = yaml.safe_load(raw)
    except yaml.YAMLError:
        value = raw
    parts = key.split(".")
    node = mapping
    for i, part in enumerate(parts[:-1]):
        here = ".".join(parts[: i + 1])
        if isinstance(node, list):
            try:
                node = node[int(part)]
            except (ValueError, IndexError):
                raise ScenarioError(f"override '{key}': bad list index at '{here}'") from None
        elif isinstance(node, dict):
            if part not in node:
                raise ScenarioError(f"override '{key}': no such key '{here}'")
            node = node[part]
        else:
            raise ScenarioError(f"override '{key}': '{here}' is not a mapping")
    last = parts[-1]
    if isinstance(node, list):
        try:
            node[int(last)] = value
        except (ValueError, IndexError):
            raise ScenarioError(f"override '{key}': bad list index '{last}'") from None
    elif isinstance(node, dict):
        node[last] = value
    else:
        raise ScenarioError(f"override '{key}': parent is not a mapping")
    return mapping


@dataclass(frozen=True)
class Scenario:
    name: str
    duration: float
    h: float
    dt: float
    params: QuadParams
    initial: RigidBodyState
    trajectory: Trajectory
    disturbance: DisturbanceProfile
    controller: str
    gains: dict
    flags: dict

    @property
    def n_ticks(self):
        return int(round(self.duration / self.h))

    @property
    def n_sub(self):
        return int(round(self.h / self.dt))

    def controller_config(self, kind=None):
        """Assemble the controller construction mapping for one gain block."""
        kind = kind or self.controller
        if kind not in self.gains:
            raise ScenarioError(f"'gains.{kind}': no gain block for this controller")
        cfg = {"kind": kind}
        for key, value in self.flags.items():
            if key != "actuator_layer":
                cfg[key] = value
        cfg.update(_dealias(self.gains[kind]))
        return cfg

    @property
    def actuator_layer(self):
        return bool(self.flags.get("actuator_layer", False))

    def with_controller(self, kind):
        if kind not in CONTROLLER_KINDS:
            raise ScenarioError(f"'controller': unknown kind {kind!r}")
        return replace(self, controller=kind)


def scenario_from_mapping(m) -> Scenario:
    if not isinstance(m, dict):
        raise ScenarioError("scenario root: expected a mapping")
    m = _dealias(m)

    name = _require(m, "name", "")
    if not isinstance(name, str) or not name:
        raise ScenarioError("'name': expected a non-empty string")
    duration = _number(_require(m, "duration", ""), "duration", positive=True)
    h = _number(_require(m, "h", ""), "h", positive=True)
    dt = _number(m.get("dt", h), "dt", positive=True)
    if dt > h * (1.0 + 1e-9):
        raise ScenarioError(f"'dt': plant step {dt} exceeds controller step h={h}")
    n_sub = h / dt
    if abs(n_sub - round(n_sub)) > 1e-6:
        raise ScenarioError(f"'dt': controller step h={h} must be an integer multiple of dt={dt}")
    if duration < h:
        raise ScenarioError(f"'duration': {duration} is shorter than one controller step h={h}")

    try:
        params = QuadParams.from_mapping(_require(m, "plant", ""))
    except (TypeError, ValueError, KeyError) as exc:
        raise ScenarioError(f"'plant': {exc}") from None

    init_m = _require(m, "initial", "")
    if not isinstance(init_m, dict):
        raise ScenarioError("'initial': expected a mapping")
    unknown = set(init_m) - {"p", "v", "rpy", "omega"}
    if unknown:
        raise ScenarioError(f"'initial.{sorted(unknown)[0]}': unknown key")
    p0 = _vector3(_require(init_m, "p", "initial."), "initial.p")
    v0 = _vector3(init_m.get("v", (0.0, 0.0, 0.0)), "initial.v")
    rpy = _vector3(init_m.get("rpy", (0.0, 0.0, 0.0)), "initial.rpy")
    w0 = _vector3(init_m.get("omega", (0.0, 0.0, 0.0)), "initial.omega")
    initial = RigidBodyState(p=p0, v=v0, R=so3.from_rpy(*rpy), omega=w0)

    try:
        trajectory = trajectory_from_mapping(_require(m, "reference", ""))
    except (TypeError, ValueError, KeyError) as exc:
        raise ScenarioError(f"'reference': {exc}") from None

    if "disturbance" in m and m["disturbance"]:
        try:
            disturbance = DisturbanceProfile.from_mapping(m["disturbance"])
        except (TypeError, ValueError, KeyError) as exc:
            raise ScenarioError(f"'disturbance': {exc}") from None
    else:
        disturbance = ZERO_PROFILE

    controller = _require(m, "controller", "")
    if controller not in CONTROLLER_KINDS:
        raise ScenarioError(
            f"'controller': unknown kind {controller!r}; expected one of {CONTROLLER_KINDS}"
        )

    flags = m.get("flags", {})
    if not isinstance(flags, dict):
        raise ScenarioError("'flags': expected a mapping")
    for key in flags:
        if key not in _FLAG_KEYS:
            raise ScenarioError(f"'flags.{key}': unknown flag; expected one of {_FLAG_KEYS}")
    if "omega_d" in flags and flags["omega_d"] not in ("zero", "rd_diff"):
        raise ScenarioError(f"'flags.omega_d': expected 'zero' or 'rd_diff', got {flags['omega_d']!r}")
    if "f_max" in flags:
        _number(flags["f_max"], "flags.f_max", positive=True)
    for key in ("gravity_feedforward", "actuator_layer"):
        if key in flags and not isinstance(flags[key], bool):
            raise ScenarioError(f"'flags.{key}': expected true or false")

    gains = _require(m, "gains", "")
    if not isinstance(gains, dict) or not gains:
        raise ScenarioError("'gains': expected a non-empty mapping of controller kind to gain block")
    for kind in gains:
        if kind not in CONTROLLER_KINDS:
            raise ScenarioError(f"'gains.{kind}': unknown controller kind")
    if controller not in gains:
        raise ScenarioError(f"'gains.{controller}': selected controller has no gain block")

    unknown = set(m) - {
        "name", "duration", "h", "dt", "plant", "initial", "reference",
        "disturbance", "controller", "flags", "gains",
    }
    if unknown:
        raise ScenarioError(f"'{sorted(unknown)[0]}': unknown top-level key")

    sc = Scenario(
        name=name,
        duration=duration,
        h=h,
        dt=dt,
        params=params,
        initial=initial,
        trajectory=trajectory,
        disturbance=disturbance,
        controller=controller,
        gains=gains,
        flags=dict(flags),
    )

    # Constructing a controller per gain block exercises every per-axis
    # gain validation up front, so a bad value fails at load, not mid-run.
    for kind in gains:
        try:
            CascadeController(params, sc.controller_config(kind), h)
        except KeyError as exc:
            raise ScenarioError(f"'gains.{kind}': missing key {exc}") from None
        except (TypeError, ValueError) as exc:
            raise ScenarioError(f"'gains.{kind}': {exc}") from None
    return sc


def load_scenario(path, overrides=(), controller=None, duration=None, h=None) -> Scenario:
    """Load and validate a scenario file, applying CLI-level overrides."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file {path}: {exc}") from None
    except yaml.YAMLError as exc:
        raise ScenarioError(f"cannot parse scenario file {path}: {exc}") from None
    if not isinstance(raw, dict):
        raise ScenarioError(f"scenario file {path}: expected a top-level mapping")
    raw = _dealias(raw)
    for text in overrides:
        apply_override(raw, text)
    if controller is not None:
        raw["controller"] = controller
    if duration is not None:
        raw["duration"] = duration
    if h is not None:
        # Keep the plant step coupled when the file had them equal, so a
        # rate override does not silently change the substep count.
        if "dt" not in raw or raw.get("dt") == raw.get("h"):
            raw["dt"] = h
        raw["h"] = h
    return scenario_from_mapping(raw)
