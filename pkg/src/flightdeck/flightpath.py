"""Waypoint path model shared by every interface.

A FlightPath is an ordered list of waypoints with implicit segments between
consecutive pairs.  All mutations go through the methods here, which clamp
(or reject) out-of-bounds positions and bump a revision counter the wire
protocol uses for snapshot ordering.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from . import geometry
from .errors import NoGroundHit, OutOfBounds, PathLimitExceeded, UnknownWaypoint
from .geometry import Box, Ray, SelectionZone, Vec3

LAB_SIDE = 3.048  # 10 ft lab, all three dimensions
DEFAULT_BOUNDS = Box.cube(LAB_SIDE)
MAX_WAYPOINTS = 256


@dataclass(frozen=True)
class Waypoint:
    id: int
    position: Vec3


@dataclass(frozen=True)
class SightLine:
    """Vertical guide from a waypoint straight down to the ground."""

    waypoint_id: int
    ground_point: Vec3


@dataclass(frozen=True)
class Highlight:
    """Result of a selection-zone query: waypoint ids and 1-based segment indices."""

    waypoints: frozenset[int]
    segments: frozenset[int]


class FlightPath:
    """Ordered waypoints with unique, never-reused ids.

    Segment i (1-based, i in [1, len-1]) connects waypoints at list positions
    i-1 and i.  Every successful mutation strictly increments ``revision``.
    """

    def __init__(
        self,
        bounds: Box = DEFAULT_BOUNDS,
        *,
        clamp_to_bounds: bool = True,
        max_waypoints: int = MAX_WAYPOINTS,
    ):
        self.bounds = bounds
        self.clamp_to_bounds = clamp_to_bounds
        self.max_waypoints = max_waypoints
        self._waypoints: list[Waypoint] = []
        self._revision = 0
        self._next_id = 1

    @property
    def revision(self) -> int:
        return self._revision

    @property
    def waypoints(self) -> tuple[Waypoint, ...]:
        return tuple(self._waypoints)

    def __len__(self) -> int:
        return len(self._waypoints)

    def positions(self) -> list[Vec3]:
        return [w.position for w in self._waypoints]

    def get(self, waypoint_id: int) -> Waypoint:
        for w in self._waypoints:
            if w.id == waypoint_id:
                return w
        raise UnknownWaypoint(f"no waypoint with id {waypoint_id}")

    def _index_of(self, waypoint_id: int) -> int:
        for i, w in enumerate(self._waypoints):
            if w.id == waypoint_id:
                return i
        raise UnknownWaypoint(f"no waypoint with id {waypoint_id}")

    def _admit(self, position: Vec3) -> Vec3:
        if not position.is_finite():
            raise OutOfBounds("waypoint position must be finite")
        if self.clamp_to_bounds:
            return self.bounds.clamp(position)
        if not self.bounds.contains(position):
            raise OutOfBounds(f"position {tuple(position)} outside lab bounds")
        return position

    def add_waypoint(self, position: Vec3, after: Optional[int] = None) -> Waypoint:
        """Append a waypoint, or insert it right after the waypoint named by id."""
        if len(self._waypoints) >= self.max_waypoints:
            raise PathLimitExceeded(f"path limited to {self.max_waypoints} waypoints")
        index = len(self._waypoints) if after is None else self._index_of(after) + 1
        wp = Waypoint(self._next_id, self._admit(position))
        self._next_id += 1
        self._waypoints.insert(index, wp)
        self._revision += 1
        return wp

    def add_waypoint_indirect(self, pick_ray: Ray, tilt_ray: Ray) -> Waypoint:
        """Two-phase placement: ray-pick a ground point, tilt to set height."""
        ground = geometry.intersect_ray_ground(pick_ray)
        if ground is None:
            raise NoGroundHit("pick ray does not reach the ground plane")
        z = geometry.height_from_tilt(tilt_ray, ground.xy, self.bounds.hi.z)
        return self.add_waypoint(Vec3(ground.x, ground.y, z))

    def move_waypoint(self, waypoint_id: int, new_position: Vec3) -> None:
        i = self._index_of(waypoint_id)
        self._waypoints[i] = Waypoint(waypoint_id, self._admit(new_position))
        self._revision += 1

    def delete_waypoint(self, waypoint_id: int) -> None:
        i = self._index_of(waypoint_id)
        del self._waypoints[i]
        self._revision += 1

    def segments(self) -> Iterator[tuple[int, Vec3, Vec3]]:
        """Yield (index, a, b) for each segment; indices are 1-based."""
        for i in range(1, len(self._waypoints)):
            yield i, self._waypoints[i - 1].position, self._waypoints[i].position

    def highlight(self, zone: SelectionZone) -> Highlight:
        """Waypoints and segments currently inside the selection zone."""
        wps = frozenset(
            w.id for w in self._waypoints if geometry.in_selection_zone(zone, w.position)
        )
        segs = frozenset(
            i for i, a, b in self.segments() if geometry.segment_in_zone(zone, a, b)
        )
        return Highlight(wps, segs)

    def sight_lines(self) -> list[SightLine]:
        return [
            SightLine(w.id, Vec3(w.position.x, w.position.y, 0.0)) for w in self._waypoints
        ]

    def snapshot(self) -> dict:
        """Wire-ready view of the path."""
        return {
            "revision": self._revision,
            "waypoints": [
                {"id": w.id, "pos": [w.position.x, w.position.y, w.position.z]}
                for w in self._waypoints
            ],
        }
