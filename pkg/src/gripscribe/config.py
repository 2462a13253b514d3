"""Project configuration: one JSON document covering every module.

Parsing is strict: unknown sections or keys are errors (they are almost
always typos), and every failure message carries the dotted field path.  An
empty document is valid; every field has a default.
"""

import json
from dataclasses import dataclass, field

from .dynamics import DamperPlacement, DynamicParams, HandImpedance
from .handlemount import MountConfig
from .kinematics import MechanismConfig, Variant
from .penholder import GripperGeometry
from .signals import IntentPath, TremorSpec


class ConfigError(Exception):
    """Configuration document failed to parse or validate."""


@dataclass
class ProjectConfig:
    mechanism: MechanismConfig = field(default_factory=MechanismConfig)
    dynamics: DynamicParams = field(default_factory=DynamicParams)
    hand: HandImpedance = field(default_factory=HandImpedance)
    tremor: TremorSpec = field(default_factory=TremorSpec)
    intent: IntentPath = field(default_factory=IntentPath)
    gripper: GripperGeometry = field(default_factory=GripperGeometry)
    mount: MountConfig = field(default_factory=MountConfig)
    out_dir: str = "out"


def _number(path, v):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {type(v).__name__}")
    return float(v)


def _integer(path, v):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{path}: expected an integer, got {type(v).__name__}")
    return v


def _point(path, v):
    if (not isinstance(v, (list, tuple)) or len(v) != 2):
        raise ConfigError(f"{path}: expected [x, y]")
    return (_number(f"{path}[0]", v[0]), _number(f"{path}[1]", v[1]))


def _string(path, v, allowed=None):
    if not isinstance(v, str):
        raise ConfigError(f"{path}: expected a string")
    if allowed is not None and v not in allowed:
        raise ConfigError(f"{path}: expected one of {sorted(allowed)}, got {v!r}")
    return v


def _enum(path, v, enum_cls):
    s = _string(path, v, {e.value for e in enum_cls})
    return enum_cls(s)


_SECTION_FIELDS = {
    "mechanism": {
        "variant": lambda p, v: _enum(p, v, Variant),
        "l1": _number, "l2": _number, "base": _point,
        "joint_clearance_delta": _number, "theta1_range": _point,
    },
    "dynamics": {
        "m1": _number, "m2": _number, "lc1": _number, "lc2": _number,
        "i1": _number, "i2": _number, "b1": _number, "b2": _number,
        "damper_placement": lambda p, v: _enum(p, v, DamperPlacement),
        "pen_drag": _number,
    },
    "hand": {"k": _number, "d": _number},
    "tremor": {
        "kind": lambda p, v: _string(p, v),
        "amplitude": _number, "frequency": _number, "band": _point,
        "rate": _number, "width": _number, "seed": _integer,
        "direction": _point,
    },
    "intent": {
        "kind": lambda p, v: _string(p, v),
        "start": _point, "end": _point, "center": _point,
        "radius": _number, "lobe_fx": _number, "lobe_fy": _number,
        "speed": _number,
    },
    "gripper": {
        "w": _number, "a": _number, "c": _number, "f": _number,
        "h0": _number, "s_max": _number, "pitch": _number,
        "d_min": _number, "d_max": _number,
    },
    "mount": {"k1": _number, "k2": _number, "k3": _number},
}

_SECTION_TYPES = {
    "mechanism": MechanismConfig,
    "dynamics": DynamicParams,
    "hand": HandImpedance,
    "tremor": TremorSpec,
    "intent": IntentPath,
    "gripper": GripperGeometry,
    "mount": MountConfig,
}


def _parse_section(name, doc):
    if not isinstance(doc, dict):
        raise ConfigError(f"{name}: expected an object")
    fields = _SECTION_FIELDS[name]
    kwargs = {}
    for key, value in doc.items():
        if key not in fields:
            raise ConfigError(f"{name}.{key}: unknown field")
        kwargs[key] = fields[key](f"{name}.{key}", value)
    try:
        return _SECTION_TYPES[name](**kwargs)
    except ValueError as exc:
        msg = str(exc)
        bad = next((k for k in kwargs if msg.startswith(k)), None)
        prefix = f"{name}.{bad}" if bad else name
        raise ConfigError(f"{prefix}: {msg}") from exc


def parse_config(doc: dict) -> ProjectConfig:
    if not isinstance(doc, dict):
        raise ConfigError("top level: expected an object")
    cfg = ProjectConfig()
    for key, value in doc.items():
        if key == "out_dir":
            cfg.out_dir = _string("out_dir", value)
        elif key in _SECTION_FIELDS:
            setattr(cfg, key, _parse_section(key, value))
        else:
            raise ConfigError(f"{key}: unknown section")
    return cfg


def load_config(path) -> ProjectConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    return parse_config(doc)


def default_config() -> ProjectConfig:
    return ProjectConfig()
