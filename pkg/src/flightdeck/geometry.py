"""Pure 3D interaction math.

Rays, ground-plane picking, tilt-to-height, selection-sphere membership and
the uniform-scale/yaw/translate mapping between world space and the operator's
view space.  Everything here is a pure function over immutable values; z is
up and units are meters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional

from .errors import DegenerateGesture, DegenerateRay

_DIRECTION_TOL = 1e-9


class Vec3(NamedTuple):
    x: float
    y: float
    z: float

    def __add__(self, other: "Vec3") -> "Vec3":  # type: ignore[override]
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __mul__(self, s: float) -> "Vec3":  # type: ignore[override]
        return Vec3(self.x * s, self.y * s, self.z * s)

    __rmul__ = __mul__  # type: ignore[assignment]

    def __neg__(self) -> "Vec3":
        return Vec3(-self.x, -self.y, -self.z)

    def dot(self, other: "Vec3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def norm(self) -> float:
        return math.sqrt(self.dot(self))

    def dist(self, other: "Vec3") -> float:
        return (self - other).norm()

    def normalized(self) -> "Vec3":
        n = self.norm()
        if n < 1e-12:
            raise ValueError("cannot normalize a zero-length vector")
        return Vec3(self.x / n, self.y / n, self.z / n)

    def with_z(self, z: float) -> "Vec3":
        return Vec3(self.x, self.y, z)

    @property
    def xy(self) -> tuple[float, float]:
        return (self.x, self.y)

    def is_finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.z)

    @staticmethod
    def of(seq) -> "Vec3":
        x, y, z = seq
        return Vec3(float(x), float(y), float(z))


ZERO = Vec3(0.0, 0.0, 0.0)


def lerp(a: Vec3, b: Vec3, t: float) -> Vec3:
    return Vec3(
        a.x + (b.x - a.x) * t,
        a.y + (b.y - a.y) * t,
        a.z + (b.z - a.z) * t,
    )


@dataclass(frozen=True)
class Box:
    """Axis-aligned box used for the lab bounds."""

    lo: Vec3
    hi: Vec3

    def __post_init__(self):
        if not (self.lo.x <= self.hi.x and self.lo.y <= self.hi.y and self.lo.z <= self.hi.z):
            raise ValueError("box lo must not exceed hi")

    @staticmethod
    def cube(side: float, origin: Vec3 = ZERO) -> "Box":
        return Box(origin, origin + Vec3(side, side, side))

    @property
    def size(self) -> Vec3:
        return self.hi - self.lo

    @property
    def center(self) -> Vec3:
        return lerp(self.lo, self.hi, 0.5)

    def contains(self, p: Vec3, tol: float = 0.0) -> bool:
        return (
            self.lo.x - tol <= p.x <= self.hi.x + tol
            and self.lo.y - tol <= p.y <= self.hi.y + tol
            and self.lo.z - tol <= p.z <= self.hi.z + tol
        )

    def clamp(self, p: Vec3) -> Vec3:
        return Vec3(
            min(max(p.x, self.lo.x), self.hi.x),
            min(max(p.y, self.lo.y), self.hi.y),
            min(max(p.z, self.lo.z), self.hi.z),
        )


@dataclass(frozen=True)
class Ray:
    """Half-line with a unit direction."""

    origin: Vec3
    direction: Vec3

    def __post_init__(self):
        if not (self.origin.is_finite() and self.direction.is_finite()):
            raise ValueError("ray components must be finite")
        if abs(self.direction.norm() - 1.0) > _DIRECTION_TOL:
            raise ValueError("ray direction must be a unit vector")

    @staticmethod
    def aim(origin: Vec3, direction: Vec3) -> "Ray":
        """Build a ray, normalizing the direction."""
        return Ray(origin, direction.normalized())

    def at(self, t: float) -> Vec3:
        return self.origin + self.direction * t


@dataclass(frozen=True)
class SelectionZone:
    """Sphere around the placement point; gestures act on path elements inside."""

    center: Vec3
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("selection zone radius must be positive")


class TransformDirection(Enum):
    WORLD_TO_VIEW = "world_to_view"
    VIEW_TO_WORLD = "view_to_world"


@dataclass(frozen=True)
class EnvTransform:
    """Uniform scale, yaw about the vertical axis, then horizontal translation.

    Maps world coordinates into the operator's view of the environment.  z is
    scaled with the rest of the space but is never rotated out of the
    vertical nor translated.
    """

    scale: float = 1.0
    yaw: float = 0.0
    tx: float = 0.0
    ty: float = 0.0

    def __post_init__(self):
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise ValueError("scale must be positive and finite")

    def world_to_view(self, p: Vec3) -> Vec3:
        c, s = math.cos(self.yaw), math.sin(self.yaw)
        x, y = p.x * self.scale, p.y * self.scale
        return Vec3(c * x - s * y + self.tx, s * x + c * y + self.ty, p.z * self.scale)

    def view_to_world(self, p: Vec3) -> Vec3:
        c, s = math.cos(self.yaw), math.sin(self.yaw)
        x, y = p.x - self.tx, p.y - self.ty
        return Vec3((c * x + s * y) / self.scale, (-s * x + c * y) / self.scale, p.z / self.scale)


def transform_point(t: EnvTransform, p: Vec3, direction: TransformDirection) -> Vec3:
    if direction is TransformDirection.WORLD_TO_VIEW:
        return t.world_to_view(p)
    return t.view_to_world(p)


def pinch_scale(
    t: EnvTransform,
    initial_hand_gap: float,
    current_hand_gap: float,
    pivot_view: Vec3,
) -> EnvTransform:
    """Rescale the environment about a view-space pivot.

    The scale is multiplied by the ratio of hand gaps and the horizontal
    translation is adjusted so the world point under the pivot keeps its
    ground position (z carries no translation, so the anchor is horizontal).
    """
    if initial_hand_gap < 1e-6 or current_hand_gap < 1e-6:
        raise DegenerateGesture("hand gap too small to define a scale ratio")
    new_scale = t.scale * (current_hand_gap / initial_hand_gap)
    world = t.view_to_world(pivot_view)
    c, s = math.cos(t.yaw), math.sin(t.yaw)
    x, y = world.x * new_scale, world.y * new_scale
    return EnvTransform(
        scale=new_scale,
        yaw=t.yaw,
        tx=pivot_view.x - (c * x - s * y),
        ty=pivot_view.y - (s * x + c * y),
    )


def intersect_ray_ground(ray: Ray) -> Optional[Vec3]:
    """First point (t > 0) where the ray meets the plane z = 0, if any."""
    dz = ray.direction.z
    if dz == 0.0:
        return None
    t = -ray.origin.z / dz
    if not (t > 0.0 and math.isfinite(t)):
        return None
    return Vec3(ray.origin.x + t * ray.direction.x, ray.origin.y + t * ray.direction.y, 0.0)


def height_from_tilt(ray: Ray, anchor_xy: tuple[float, float], ceiling: float) -> float:
    """Height designated by tilting the controller over a picked ground point.

    Evaluates the ray's z where its horizontal projection passes closest to
    the anchor, clamped to [0, ceiling].
    """
    dx, dy = ray.direction.x, ray.direction.y
    h2 = dx * dx + dy * dy
    if h2 < 1e-18:
        raise DegenerateRay("vertical ray makes no horizontal progress toward the anchor")
    ax, ay = anchor_xy
    t = ((ax - ray.origin.x) * dx + (ay - ray.origin.y) * dy) / h2
    z = ray.origin.z + t * ray.direction.z
    return min(max(z, 0.0), ceiling)


def in_selection_zone(zone: SelectionZone, p: Vec3) -> bool:
    return p.dist(zone.center) <= zone.radius


def point_segment_distance(p: Vec3, a: Vec3, b: Vec3) -> float:
    """Distance from p to the closed segment a-b."""
    ab = b - a
    den = ab.dot(ab)
    if den == 0.0:
        return p.dist(a)
    t = (p - a).dot(ab) / den
    t = min(max(t, 0.0), 1.0)
    return p.dist(a + ab * t)


def segment_in_zone(zone: SelectionZone, a: Vec3, b: Vec3) -> bool:
    return point_segment_distance(zone.center, a, b) <= zone.radius
