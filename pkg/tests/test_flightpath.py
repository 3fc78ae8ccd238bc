import numpy as np
import pytest

from flightdeck.errors import (
    DegenerateRay,
    NoGroundHit,
    OutOfBounds,
    PathLimitExceeded,
    UnknownWaypoint,
)
from flightdeck.flightpath import LAB_SIDE, FlightPath
from flightdeck.geometry import Box, Ray, SelectionZone, Vec3, point_segment_distance


def make_path(*positions, **kwargs):
    path = FlightPath(**kwargs)
    wps = [path.add_waypoint(Vec3(*p)) for p in positions]
    return path, wps


class TestAddWaypoint:
    def test_append_to_empty(self):
        path = FlightPath()
        wp = path.add_waypoint(Vec3(1, 1, 1))
        assert len(path) == 1
        assert path.waypoints[0] is wp
        assert path.revision == 1

    def test_insert_after(self):
        path, (w1, w2) = make_path((0, 0, 1), (2, 0, 1))
        mid = path.add_waypoint(Vec3(1, 0, 1), after=w1.id)
        assert [w.id for w in path.waypoints] == [w1.id, mid.id, w2.id]

    def test_out_of_bounds_clamped(self):
        path = FlightPath()
        wp = path.add_waypoint(Vec3(0, 0, 9))
        assert wp.position.z == LAB_SIDE

    def test_out_of_bounds_rejected_when_clamping_off(self):
        path = FlightPath(clamp_to_bounds=False)
        with pytest.raises(OutOfBounds):
            path.add_waypoint(Vec3(0, 0, 9))

    def test_insert_after_unknown_id(self):
        path, _ = make_path((1, 1, 1))
        with pytest.raises(UnknownWaypoint):
            path.add_waypoint(Vec3(2, 2, 2), after=999)

    def test_path_length_limit(self):
        path = FlightPath(max_waypoints=3)
        for i in range(3):
            path.add_waypoint(Vec3(1, 1, 0.1 * (i + 1)))
        with pytest.raises(PathLimitExceeded):
            path.add_waypoint(Vec3(2, 2, 1))


class TestAddWaypointIndirect:
    def test_composed_placement(self):
        # Pick straight down from (1,1,2) gives ground (1,1); a horizontal
        # tilt ray at z=1 keeps that height, so the waypoint lands at (1,1,1).
        path = FlightPath()
        wp = path.add_waypoint_indirect(
            Ray(Vec3(1, 1, 2), Vec3(0, 0, -1)),
            Ray(Vec3(0, 0, 1), Vec3(1, 0, 0)),
        )
        assert wp.position.dist(Vec3(1, 1, 1)) < 1e-12

    def test_upward_pick_no_ground_hit(self):
        path = FlightPath()
        with pytest.raises(NoGroundHit):
            path.add_waypoint_indirect(
                Ray(Vec3(1, 1, 1), Vec3(0, 0, 1)),
                Ray(Vec3(0, 0, 1), Vec3(1, 0, 0)),
            )
        assert path.revision == 0

    def test_vertical_tilt_ray_degenerate(self):
        path = FlightPath()
        with pytest.raises(DegenerateRay):
            path.add_waypoint_indirect(
                Ray(Vec3(1, 1, 2), Vec3(0, 0, -1)),
                Ray(Vec3(0, 0, 1), Vec3(0, 0, 1)),
            )


class TestMoveWaypoint:
    def test_move_to_same_position_still_bumps_revision(self):
        path, (w1,) = make_path((1, 1, 1))
        rev = path.revision
        path.move_waypoint(w1.id, Vec3(1, 1, 1))
        assert path.revision == rev + 1
        assert path.get(w1.id).position == Vec3(1, 1, 1)

    def test_move_clamps_below_floor(self):
        path, (w1,) = make_path((1, 1, 1))
        path.move_waypoint(w1.id, Vec3(0, 0, -1))
        assert path.get(w1.id).position.z == 0.0

    def test_move_unknown(self):
        path, _ = make_path((1, 1, 1))
        with pytest.raises(UnknownWaypoint):
            path.move_waypoint(42, Vec3(1, 1, 1))

    def test_move_preserves_order(self):
        path, wps = make_path((1, 1, 1), (2, 2, 1), (1, 2, 2))
        path.move_waypoint(wps[1].id, Vec3(0.5, 0.5, 0.5))
        assert [w.id for w in path.waypoints] == [w.id for w in wps]


class TestDeleteWaypoint:
    def test_delete_middle_connects_neighbors(self):
        path, (a, b, c) = make_path((0, 0, 1), (1, 0, 1), (2, 0, 1))
        path.delete_waypoint(b.id)
        segs = list(path.segments())
        assert len(segs) == 1
        _, s0, s1 = segs[0]
        assert (s0, s1) == (a.position, c.position)

    def test_delete_sole_waypoint(self):
        path, (w,) = make_path((1, 1, 1))
        path.delete_waypoint(w.id)
        assert len(path) == 0

    def test_double_delete(self):
        path, (w,) = make_path((1, 1, 1))
        path.delete_waypoint(w.id)
        with pytest.raises(UnknownWaypoint):
            path.delete_waypoint(w.id)

    def test_ids_never_reused(self):
        path, (w,) = make_path((1, 1, 1))
        path.delete_waypoint(w.id)
        w2 = path.add_waypoint(Vec3(1, 1, 1))
        assert w2.id != w.id


class TestHighlight:
    def test_far_zone_selects_nothing(self):
        path, _ = make_path((0.5, 0.5, 1), (1, 1, 1))
        hl = path.highlight(SelectionZone(Vec3(3, 3, 3), 0.2))
        assert hl.waypoints == frozenset()
        assert hl.segments == frozenset()

    def test_zone_on_middle_waypoint_selects_incident_segments(self):
        path, (w1, w2, w3) = make_path((0.5, 1, 1), (1.5, 1, 1), (2.5, 1, 1))
        hl = path.highlight(SelectionZone(Vec3(1.5, 1, 1), 0.1))
        assert hl.waypoints == frozenset({w2.id})
        assert hl.segments == frozenset({1, 2})

    def test_agrees_with_dense_sampling_oracle(self, rng):
        # Brute-force oracle: sample each segment at 1 mm including endpoints.
        for _ in range(100):
            path = FlightPath()
            for _ in range(rng.integers(2, 7)):
                path.add_waypoint(Vec3(*rng.uniform(0.2, 2.8, 3)))
            zone = SelectionZone(Vec3(*rng.uniform(0.2, 2.8, 3)), rng.uniform(0.15, 0.5))
            hl = path.highlight(zone)
            for idx, a, b in path.segments():
                true_d = point_segment_distance(zone.center, a, b)
                if abs(true_d - zone.radius) <= 1e-6:
                    continue  # boundary case excluded by the margin policy
                n = max(2, int(np.ceil(a.dist(b) / 0.001)) + 1)
                ts = np.linspace(0.0, 1.0, n)
                pts = np.outer(1 - ts, a) + np.outer(ts, b)
                d = np.min(np.linalg.norm(pts - np.asarray(zone.center), axis=1))
                assert (d <= zone.radius) == (idx in hl.segments)
            for w in path.waypoints:
                d = w.position.dist(zone.center)
                if abs(d - zone.radius) > 1e-6:
                    assert (d <= zone.radius) == (w.id in hl.waypoints)


class TestInvariants:
    def test_every_mutation_strictly_increases_revision(self, rng):
        path = FlightPath()
        revisions = [path.revision]
        ids = []
        for _ in range(50):
            roll = rng.uniform()
            try:
                if roll < 0.5 or not ids:
                    wp = path.add_waypoint(Vec3(*rng.uniform(0, 3, 3)))
                    ids.append(wp.id)
                elif roll < 0.75:
                    path.move_waypoint(ids[rng.integers(len(ids))], Vec3(*rng.uniform(-1, 4, 3)))
                else:
                    wid = ids.pop(rng.integers(len(ids)))
                    path.delete_waypoint(wid)
            except PathLimitExceeded:
                continue
            revisions.append(path.revision)
        assert all(b > a for a, b in zip(revisions, revisions[1:]))

    def test_mutations_never_reorder_survivors(self, rng):
        path, wps = make_path(*[(1 + 0.01 * i, 1, 1) for i in range(10)])
        order = [w.id for w in wps]
        path.delete_waypoint(order[4])
        path.move_waypoint(order[7], Vec3(2, 2, 2))
        path.add_waypoint(Vec3(1, 2, 1), after=order[2])
        survivors = [w.id for w in path.waypoints if w.id in order]
        expected = [i for i in order if i != order[4]]
        assert survivors == expected

    def test_sight_lines_sit_below_waypoints(self, rng):
        path = FlightPath()
        for _ in range(10):
            path.add_waypoint(Vec3(*rng.uniform(0, 3.048, 3)))
        for line in path.sight_lines():
            wp = path.get(line.waypoint_id)
            assert line.ground_point.z == 0.0
            assert line.ground_point.xy == wp.position.xy

    def test_positions_stay_in_bounds_under_random_edits(self, rng):
        bounds = Box.cube(3.048)
        path = FlightPath(bounds)
        ids = []
        for _ in range(200):
            p = Vec3(*rng.uniform(-2, 6, 3))
            if ids and rng.uniform() < 0.4:
                path.move_waypoint(ids[rng.integers(len(ids))], p)
            else:
                ids.append(path.add_waypoint(p).id)
            assert all(bounds.contains(w.position) for w in path.waypoints)

    def test_snapshot_shape(self):
        path, (w1,) = make_path((1, 2, 0.5))
        snap = path.snapshot()
        assert snap == {
            "revision": 1,
            "waypoints": [{"id": w1.id, "pos": [1.0, 2.0, 0.5]}],
        }
