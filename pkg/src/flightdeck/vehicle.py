"""Simulated quadrotor and its hierarchical flight stack.

The plant is a double integrator steered by a saturated PD tracker with an
additive bounded disturbance.  Global planning stays trivially simple
(constant-speed piecewise-linear references through user waypoints) and the
tracker's worst-case deviation is certified separately by an empirical
adversarial sweep (``compute_teb``), preserving the plan/track decoupling
while avoiding a reachability solver.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from . import _kernels
from .errors import (
    EmptyPath,
    InvalidModeTransition,
    InvalidTimestep,
    NotFlying,
    UnstableGains,
)
from .flightpath import FlightPath
from .geometry import ZERO, Box, Vec3


class Mode(str, Enum):
    GROUNDED = "grounded"
    TAKING_OFF = "taking_off"
    FLYING = "flying"
    LANDING = "landing"


# Crazyflie-scale airframe: ~0.09 m motor-to-motor diagonal arms.
BODY_RADIUS = 0.07
ROTOR_OFFSETS = (
    Vec3(0.046, 0.046, 0.0),
    Vec3(0.046, -0.046, 0.0),
    Vec3(-0.046, 0.046, 0.0),
    Vec3(-0.046, -0.046, 0.0),
)

DEAD_ZONE = 0.1  # joystick deflection below this produces no motion
FULL_DEFLECTION_OFFSET = 1.0  # meters of setpoint offset at 100% deflection
MAX_TRACKER_DT = 0.05


@dataclass
class TrackerParams:
    kp: float = 4.0  # 1/s^2
    kd: float = 4.0  # 1/s
    accel_max: float = 2.0  # m/s^2 per axis
    disturb_max: float = 0.2  # m/s^2
    teb: float = 0.0  # certified tracking error bound, meters

    def validate(self) -> None:
        if not (self.kp > 0 and self.kd > 0):
            raise UnstableGains("kp and kd must be positive")
        if self.kd * self.kd < 4.0 * self.kp:
            raise UnstableGains("kd^2 >= 4*kp required (no oscillatory overshoot)")
        if self.teb < 0:
            raise UnstableGains("teb must be nonnegative")


@dataclass
class VehicleConfig:
    dt: float = 0.01  # s, simulation step
    v_plan: float = 0.5  # m/s, planner speed along the path
    v_climb: float = 0.5  # m/s, vertical speed for takeoff/landing
    hover_altitude: float = 0.5  # m, hover height after launch


@dataclass(frozen=True)
class JoystickInput:
    """Normalized stick state; components are clamped to [-1, 1] on ingestion."""

    dx: float = 0.0
    dy: float = 0.0
    dz: float = 0.0

    def __post_init__(self):
        for name in ("dx", "dy", "dz"):
            v = getattr(self, name)
            object.__setattr__(self, name, min(max(float(v), -1.0), 1.0))


@dataclass
class DroneState:
    position: Vec3
    velocity: Vec3 = ZERO
    setpoint: Vec3 = ZERO
    mode: Mode = Mode.GROUNDED
    body_radius: float = BODY_RADIUS
    rotor_offsets: tuple[Vec3, ...] = ROTOR_OFFSETS

    def snapshot(self) -> "DroneState":
        """Copy safe to publish; all fields are immutable values."""
        return replace(self)


@dataclass(frozen=True)
class Trajectory:
    """Constant-speed piecewise-linear reference through waypoints in order."""

    points: tuple[Vec3, ...]
    v_plan: float
    times: tuple[float, ...]  # arrival time at each point
    duration: float

    def reference(self, t: float) -> tuple[Vec3, Vec3]:
        """Reference position and velocity at time t (held at the endpoints)."""
        pts, times = self.points, self.times
        if t <= 0.0 or self.duration == 0.0:
            if len(pts) == 1 or self.duration == 0.0:
                return pts[0], ZERO
            d = (pts[1] - pts[0]).normalized()
            return pts[0], d * self.v_plan
        if t >= self.duration:
            return pts[-1], ZERO
        i = bisect.bisect_right(times, t)  # segment from point i-1 to i
        a, b = pts[i - 1], pts[i]
        t0, t1 = times[i - 1], times[i]
        frac = (t - t0) / (t1 - t0)
        d = (b - a).normalized()
        return a + (b - a) * frac, d * self.v_plan


PathLike = Union[FlightPath, Iterable[Sequence[float]]]


def plan_trajectory(path: PathLike, v_plan: float) -> Trajectory:
    """Plan the constant-speed reference the tracker will follow."""
    if v_plan <= 0:
        raise ValueError("v_plan must be positive")
    if isinstance(path, FlightPath):
        raw = path.positions()
    else:
        raw = [Vec3.of(p) for p in path]
    if not raw:
        raise EmptyPath("trajectory needs at least one waypoint")
    pts = [raw[0]]
    for p in raw[1:]:
        if p.dist(pts[-1]) > 1e-12:  # drop zero-length segments
            pts.append(p)
    times = [0.0]
    for a, b in zip(pts, pts[1:]):
        times.append(times[-1] + a.dist(b) / v_plan)
    return Trajectory(tuple(pts), v_plan, tuple(times), times[-1])


def tracker_step(
    state: DroneState,
    params: TrackerParams,
    reference_pos: Vec3,
    reference_vel: Vec3,
    disturbance: Vec3,
    dt: float,
) -> DroneState:
    """One saturated-PD double-integrator step, semi-implicit (velocity first).

    Mirrors the arithmetic of the episode kernels; returns a new state.
    """
    if not (0.0 < dt <= MAX_TRACKER_DT):
        raise InvalidTimestep(f"dt must be in (0, {MAX_TRACKER_DT}]")
    amax = params.accel_max
    p, v = state.position, state.velocity
    ax = params.kp * (reference_pos.x - p.x) + params.kd * (reference_vel.x - v.x)
    ay = params.kp * (reference_pos.y - p.y) + params.kd * (reference_vel.y - v.y)
    az = params.kp * (reference_pos.z - p.z) + params.kd * (reference_vel.z - v.z)
    ax = min(max(ax, -amax), amax)
    ay = min(max(ay, -amax), amax)
    az = min(max(az, -amax), amax)
    vx = v.x + (ax + disturbance.x) * dt
    vy = v.y + (ay + disturbance.y) * dt
    vz = v.z + (az + disturbance.z) * dt
    return replace(
        state,
        velocity=Vec3(vx, vy, vz),
        position=Vec3(p.x + vx * dt, p.y + vy * dt, p.z + vz * dt),
    )


def deflection_to_offset(d: float) -> float:
    """Setpoint offset (m) for one axis of joystick deflection.

    Zero through the dead zone, then linear to FULL_DEFLECTION_OFFSET at 100%
    deflection; continuous at the dead-zone edge and odd-symmetric.
    """
    m = abs(d)
    if m <= DEAD_ZONE:
        return 0.0
    m = min(m, 1.0)
    off = (m - DEAD_ZONE) / (1.0 - DEAD_ZONE) * FULL_DEFLECTION_OFFSET
    return -off if d < 0 else off


def manual_setpoint(state: DroneState, stick: JoystickInput, bounds: Box) -> Vec3:
    """Apply assisted manual control: offset the setpoint from the current position.

    With every axis inside the dead zone the vehicle keeps hovering at its
    current setpoint; otherwise the setpoint becomes position + offset,
    clamped to the lab bounds.
    """
    if state.mode is not Mode.FLYING:
        raise NotFlying("manual control requires the vehicle to be flying")
    ox = deflection_to_offset(stick.dx)
    oy = deflection_to_offset(stick.dy)
    oz = deflection_to_offset(stick.dz)
    if ox == 0.0 and oy == 0.0 and oz == 0.0:
        return state.setpoint
    state.setpoint = bounds.clamp(state.position + Vec3(ox, oy, oz))
    return state.setpoint


def takeoff(state: DroneState) -> None:
    if state.mode is not Mode.GROUNDED:
        raise InvalidModeTransition(f"takeoff requires grounded, not {state.mode.value}")
    state.mode = Mode.TAKING_OFF


def land(state: DroneState) -> None:
    if state.mode is not Mode.FLYING:
        raise InvalidModeTransition(f"land requires flying, not {state.mode.value}")
    state.mode = Mode.LANDING


def advance(
    state: DroneState,
    params: TrackerParams,
    config: VehicleConfig,
    dt: float,
    disturbance: Vec3 = ZERO,
    reference: Optional[tuple[Vec3, Vec3]] = None,
) -> Mode:
    """Advance the plant one step in its current mode; returns the new mode.

    Takeoff and landing are straight vertical segments at v_climb; flight
    tracks either the supplied (position, velocity) reference or the held
    setpoint.
    """
    if state.mode is Mode.GROUNDED:
        return state.mode
    if state.mode is Mode.TAKING_OFF:
        z = state.position.z + config.v_climb * dt
        if z >= config.hover_altitude:
            state.position = state.position.with_z(config.hover_altitude)
            state.velocity = ZERO
            state.setpoint = state.position
            state.mode = Mode.FLYING
        else:
            state.position = state.position.with_z(z)
            state.velocity = Vec3(0.0, 0.0, config.v_climb)
        return state.mode
    if state.mode is Mode.LANDING:
        z = state.position.z - config.v_climb * dt
        if z <= 0.0:
            state.position = state.position.with_z(0.0)
            state.velocity = ZERO
            state.setpoint = state.position
            state.mode = Mode.GROUNDED
        else:
            state.position = state.position.with_z(z)
            state.velocity = Vec3(0.0, 0.0, -config.v_climb)
        return state.mode
    ref_pos, ref_vel = reference if reference is not None else (state.setpoint, ZERO)
    stepped = tracker_step(state, params, ref_pos, ref_vel, disturbance, dt)
    state.position = stepped.position
    state.velocity = stepped.velocity
    return state.mode


class Drone:
    """Plant plus flight-stack orchestration: modes, setpoint, active trajectory."""

    def __init__(
        self,
        position: Vec3 = ZERO,
        params: Optional[TrackerParams] = None,
        config: Optional[VehicleConfig] = None,
    ):
        self.params = params or TrackerParams()
        self.config = config or VehicleConfig()
        self.state = DroneState(position=position, setpoint=position)
        self.trajectory: Optional[Trajectory] = None
        self._traj_t = 0.0

    @property
    def mode(self) -> Mode:
        return self.state.mode

    @property
    def position(self) -> Vec3:
        return self.state.position

    def takeoff(self) -> None:
        takeoff(self.state)

    def land(self) -> None:
        land(self.state)
        self.clear_trajectory()

    def follow(self, trajectory: Trajectory) -> None:
        self.trajectory = trajectory
        self._traj_t = 0.0

    def clear_trajectory(self) -> None:
        self.trajectory = None
        self._traj_t = 0.0

    def joystick(self, stick: JoystickInput, bounds: Box) -> Vec3:
        """Manual override: cancels any active trajectory."""
        sp = manual_setpoint(self.state, stick, bounds)
        self.clear_trajectory()
        return sp

    def step(self, dt: float, disturbance: Vec3 = ZERO) -> tuple[Mode, Mode]:
        """Advance one tick; returns (mode before, mode after)."""
        before = self.state.mode
        reference = None
        if before is Mode.FLYING and self.trajectory is not None:
            reference = self.trajectory.reference(self._traj_t)
            self._traj_t += dt
            if self._traj_t >= self.trajectory.duration:
                self.state.setpoint = self.trajectory.points[-1]
                self.trajectory = None
        advance(self.state, self.params, self.config, dt, disturbance, reference)
        return before, self.state.mode


def random_episode(
    rng: np.random.Generator,
    *,
    v_plan: float,
    disturb_max: float,
    duration: float = 8.0,
    dt: float = 0.01,
    corners: bool = True,
    corner_interval: tuple[float, float] = (0.5, 2.0),
    disturb_hold: float = 0.25,
):
    """Generate one adversarial tracking episode.

    Reference: piecewise-linear at speed v_plan with random corner turns
    (or a single straight segment when corners is False).  Disturbance:
    piecewise-constant vectors of magnitude disturb_max, redrawn every
    disturb_hold seconds.  Returns (p0, v0, ref_pos, ref_vel, dist) with
    zero initial tracking error.
    """
    n = int(round(duration / dt))

    def unit_dirs(count: int) -> np.ndarray:
        v = rng.standard_normal((count, 3))
        norms = np.linalg.norm(v, axis=1, keepdims=True)
        norms[norms < 1e-12] = 1.0
        return v / norms

    if corners:
        seg_ticks = []
        total = 0
        while total < n:
            ticks = max(1, int(round(rng.uniform(*corner_interval) / dt)))
            ticks = min(ticks, n - total)
            seg_ticks.append(ticks)
            total += ticks
    else:
        seg_ticks = [n]
    dirs = unit_dirs(len(seg_ticks))
    ref_vel = np.repeat(dirs * v_plan, seg_ticks, axis=0)
    ref_pos = np.vstack([np.zeros((1, 3)), np.cumsum(ref_vel * dt, axis=0)])

    hold_ticks = max(1, int(round(disturb_hold / dt)))
    n_holds = -(-n // hold_ticks)
    d_dirs = unit_dirs(n_holds) * disturb_max
    dist = np.repeat(d_dirs, hold_ticks, axis=0)[:n]

    p0 = ref_pos[0].copy()
    v0 = ref_vel[0].copy()
    return p0, v0, np.ascontiguousarray(ref_pos), np.ascontiguousarray(ref_vel), np.ascontiguousarray(dist)


def compute_teb(
    params: TrackerParams,
    v_plan: float,
    *,
    episodes: int = 10_000,
    duration: float = 8.0,
    dt: float = 0.01,
    corners: bool = True,
    seed: int = 0,
    safety_factor: float = 1.25,
) -> float:
    """Empirical tracking error bound.

    Worst position deviation over a randomized adversarial sweep (corner
    turns at v_plan, piecewise-constant disturbances at disturb_max, zero
    initial error), multiplied by a safety factor.
    """
    params.validate()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(episodes):
        p0, v0, ref_pos, ref_vel, dist = random_episode(
            rng,
            v_plan=v_plan,
            disturb_max=params.disturb_max,
            duration=duration,
            dt=dt,
            corners=corners,
        )
        dev = _kernels.episode_max_deviation(
            p0, v0, ref_pos, ref_vel, dist, params.kp, params.kd, params.accel_max, dt
        )
        if dev > worst:
            worst = dev
    return safety_factor * worst
