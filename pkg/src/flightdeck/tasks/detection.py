"""Traversal and collision detection plus the two crash definitions.

Definition 1: any rotor contacts a hoop.  Definition 2: any part of the
vehicle contacts a hoop and the vehicle then contacts the ground within a
configurable window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from ..geometry import Vec3, lerp
from ..vehicle import DroneState, Mode
from .environment import Hoop, LabEnvironment
from .events import Event

DEFAULT_GROUND_WINDOW = 2.0  # s; quantifies "followed immediately"

ROTOR_HOOP = "rotor_hoop"
BODY_HOOP = "body_hoop"
GROUND = "ground"


@dataclass(frozen=True)
class Collision:
    kind: str  # rotor_hoop | body_hoop | ground
    hoop: Optional[str] = None


@dataclass(frozen=True)
class CrashCall:
    definition: int  # 1 or 2
    t: float


def plane_offset(p: Vec3, hoop: Hoop) -> float:
    return (p - hoop.center).dot(hoop.normal)


def detect_traversal(
    p_prev: Vec3, p_curr: Vec3, hoop: Hoop, body_radius: float = 0.0
) -> Optional[int]:
    """Direction (+1 along the normal, -1 against) if the motion crosses the
    hoop disc with body clearance; None otherwise.  Either side is valid."""
    s0 = plane_offset(p_prev, hoop)
    s1 = plane_offset(p_curr, hoop)
    if not (s0 * s1 < 0.0):  # no strict sign change: parallel or grazing
        return None
    t = s0 / (s0 - s1)
    crossing = lerp(p_prev, p_curr, t)
    if crossing.dist(hoop.center) > hoop.inner_radius - body_radius:
        return None
    return 1 if s1 > s0 else -1


def point_circle_distance(p: Vec3, center: Vec3, normal: Vec3, radius: float) -> float:
    """3D distance from a point to a circle (the hoop's center line)."""
    d = p - center
    h = d.dot(normal)
    in_plane = d - normal * h
    r = in_plane.norm()
    dr = r - radius
    return math.sqrt(dr * dr + h * h)


def detect_collisions(state: DroneState, env: LabEnvironment) -> set[Collision]:
    """Contacts at this instant: rotor-hoop, body-hoop, and ground while flying."""
    found: set[Collision] = set()
    rotors = [state.position + off for off in state.rotor_offsets]  # yaw ignored
    for hoop in env.hoops:
        body_d = point_circle_distance(state.position, hoop.center, hoop.normal, hoop.inner_radius)
        if body_d <= hoop.tube_radius + state.body_radius:
            found.add(Collision(BODY_HOOP, hoop.label))
        for r in rotors:
            if point_circle_distance(r, hoop.center, hoop.normal, hoop.inner_radius) <= hoop.tube_radius:
                found.add(Collision(ROTOR_HOOP, hoop.label))
                break
    if state.mode is Mode.FLYING and state.position.z <= state.body_radius:
        found.add(Collision(GROUND))
    return found


def classify_crash(
    events: Iterable[Event] | Sequence[Event],
    ground_window: float = DEFAULT_GROUND_WINDOW,
) -> Optional[CrashCall]:
    """Earliest crash declared by either definition, if any.

    Definition 1 fires at any rotor-hoop collision.  Definition 2 fires at
    the ground contact that follows a body-hoop collision within the window.
    At equal times definition 1 wins.
    """
    collisions = [e for e in events if e.kind == "collision"]
    candidates: list[CrashCall] = []
    for e in collisions:
        if e.payload.get("kind") == ROTOR_HOOP:
            candidates.append(CrashCall(1, e.t))
    body_times = [e.t for e in collisions if e.payload.get("kind") == BODY_HOOP]
    ground_times = [e.t for e in collisions if e.payload.get("kind") == GROUND]
    for tb in body_times:
        for tg in ground_times:
            if tb <= tg <= tb + ground_window:
                candidates.append(CrashCall(2, tg))
                break
    if not candidates:
        return None
    return min(candidates, key=lambda c: (c.t, c.definition))
