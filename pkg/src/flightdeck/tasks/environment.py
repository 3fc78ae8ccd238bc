"""Lab environment: bounds, hoops and trial definitions, plus file I/O.

Environment files are YAML; see ``default_environment`` for the shape.  All
defaults (hoop sizes, positions, trial sequences) are configuration choices
for a 10 ft cube lab, not measured values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import yaml

from ..errors import ConfigError
from ..flightpath import LAB_SIDE
from ..geometry import Box, Vec3

INTERFACE_TAGS = ("VR", "Map2D", "Manual")


@dataclass(frozen=True)
class Hoop:
    """Circular hoop standing on the floor; the opening faces the normal."""

    label: str
    center: Vec3
    normal: Vec3  # horizontal unit vector
    inner_radius: float
    tube_radius: float

    def __post_init__(self):
        n = self.normal
        if abs(n.z) > 1e-12:
            raise ConfigError(f"hoop {self.label}: normal must be horizontal")
        if abs(n.norm() - 1.0) > 1e-9:
            raise ConfigError(f"hoop {self.label}: normal must be a unit vector")
        if not (self.inner_radius > self.tube_radius > 0):
            raise ConfigError(f"hoop {self.label}: require inner_radius > tube_radius > 0")


@dataclass(frozen=True)
class TrialSpec:
    """Ordered hoop labels to traverse (repeats allowed) under one interface."""

    sequence: tuple[str, ...]
    interface_tag: str = "VR"

    def __post_init__(self):
        if not self.sequence:
            raise ConfigError("trial sequence must be nonempty")
        if self.interface_tag not in INTERFACE_TAGS:
            raise ConfigError(f"unknown interface tag {self.interface_tag!r}")

    @property
    def name(self) -> str:
        return "-".join(self.sequence)


@dataclass
class LabEnvironment:
    bounds: Box = field(default_factory=lambda: Box.cube(LAB_SIDE))
    hoops: tuple[Hoop, ...] = ()
    trials: tuple[TrialSpec, ...] = ()
    start: Vec3 = Vec3(LAB_SIDE / 2, LAB_SIDE / 2, 0.0)
    disturb_scale: float = 0.0  # trial disturbance magnitude, m/s^2

    def __post_init__(self):
        labels = set()
        for h in self.hoops:
            if h.label in labels:
                raise ConfigError(f"duplicate hoop label {h.label!r}")
            labels.add(h.label)
            if not self.bounds.contains(h.center):
                raise ConfigError(f"hoop {h.label} outside lab bounds")
        for t in self.trials:
            for lbl in t.sequence:
                if lbl not in labels:
                    raise ConfigError(f"trial references unknown hoop {lbl!r}")
        if not self.bounds.contains(self.start):
            raise ConfigError("start position outside lab bounds")

    def hoop(self, label: str) -> Hoop:
        for h in self.hoops:
            if h.label == label:
                return h
        raise ConfigError(f"no hoop labeled {label!r}")

    @property
    def ceiling(self) -> float:
        return self.bounds.hi.z

    def to_dict(self) -> dict:
        return {
            "bounds": {"lo": list(self.bounds.lo), "hi": list(self.bounds.hi)},
            "start": list(self.start),
            "disturb_scale": self.disturb_scale,
            "hoops": [
                {
                    "label": h.label,
                    "center": list(h.center),
                    "normal": list(h.normal),
                    "inner_radius": h.inner_radius,
                    "tube_radius": h.tube_radius,
                }
                for h in self.hoops
            ],
            "trials": [
                {"sequence": list(t.sequence), "interface": t.interface_tag}
                for t in self.trials
            ],
        }

    @staticmethod
    def from_dict(data: dict) -> "LabEnvironment":
        try:
            b = data.get("bounds", {})
            bounds = Box(
                Vec3.of(b.get("lo", (0, 0, 0))),
                Vec3.of(b.get("hi", (LAB_SIDE, LAB_SIDE, LAB_SIDE))),
            )
            hoops = tuple(
                Hoop(
                    label=str(h["label"]),
                    center=Vec3.of(h["center"]),
                    normal=Vec3.of(h["normal"]).normalized(),
                    inner_radius=float(h["inner_radius"]),
                    tube_radius=float(h["tube_radius"]),
                )
                for h in data.get("hoops", [])
            )
            trials = tuple(
                TrialSpec(tuple(str(s) for s in t["sequence"]), t.get("interface", "VR"))
                for t in data.get("trials", [])
            )
            start = Vec3.of(data.get("start", (LAB_SIDE / 2, LAB_SIDE / 2, 0.0)))
            disturb = float(data.get("disturb_scale", 0.0))
        except ConfigError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed environment: {exc}") from exc
        return LabEnvironment(bounds, hoops, trials, start, disturb)


def load_environment(path: Union[str, Path]) -> LabEnvironment:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read environment file: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("environment file must hold a mapping")
    return LabEnvironment.from_dict(data)


def save_environment(env: LabEnvironment, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        yaml.safe_dump(env.to_dict(), fh, sort_keys=False)


def default_environment() -> LabEnvironment:
    """Three hoops on a 1.5 m triangle centered in the lab, heights staggered.

    Normals are tangent to the triangle's circumcircle so the standard
    traversal sequences flow around the lab without sharp approach turns.
    """
    cx = cy = LAB_SIDE / 2
    circumradius = 1.5 / math.sqrt(3.0)
    hoops = []
    heights = {"A": 0.8, "B": 1.2, "C": 1.6}
    for label, angle_deg in (("A", 90.0), ("B", 210.0), ("C", 330.0)):
        a = math.radians(angle_deg)
        center = Vec3(cx + circumradius * math.cos(a), cy + circumradius * math.sin(a), heights[label])
        normal = Vec3(-math.sin(a), math.cos(a), 0.0)  # counterclockwise tangent
        hoops.append(Hoop(label, center, normal, inner_radius=0.21, tube_radius=0.02))
    trials = (
        TrialSpec(("A", "B", "C", "B"), "VR"),
        TrialSpec(("C", "A", "B"), "VR"),
        TrialSpec(("B", "C", "A"), "VR"),
    )
    return LabEnvironment(hoops=tuple(hoops), trials=trials, start=Vec3(cx, cy, 0.0))
