"""Authoritative session state: one path, one vehicle, one command order.

The session is the transport-free core of the control boundary.  Commands
(the wire payloads, minus framing) are applied strictly in arrival order;
``tick`` advances the simulation by one fixed step.  The network service,
the headless trial runner and the tests all drive this same object, which is
what makes recorded sessions replayable.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .. import vehicle
from ..errors import FlightdeckError, ProtocolError
from ..flightpath import FlightPath
from ..geometry import Ray, Vec3, ZERO
from ..tasks.environment import LabEnvironment, TrialSpec
from ..tasks.trial import DEFAULT_TIMEOUT, Observation, TrialMonitor
from ..tasks.detection import DEFAULT_GROUND_WINDOW
from ..vehicle import Drone, JoystickInput, Mode, TrackerParams, VehicleConfig

DISTURB_HOLD = 0.25  # s between disturbance direction redraws


class Session:
    """Single-writer state machine behind the wire protocol."""

    def __init__(
        self,
        env: LabEnvironment,
        *,
        params: Optional[TrackerParams] = None,
        config: Optional[VehicleConfig] = None,
        seed: int = 0,
        disturb_scale: Optional[float] = None,
        clamp_waypoints: bool = True,
        ground_window: float = DEFAULT_GROUND_WINDOW,
        trial_timeout: float = DEFAULT_TIMEOUT,
    ):
        self.env = env
        self.params = params or TrackerParams()
        self.config = config or VehicleConfig()
        self.seed = seed
        self.disturb_scale = env.disturb_scale if disturb_scale is None else disturb_scale
        self.ground_window = ground_window
        self.trial_timeout = trial_timeout

        self.path = FlightPath(env.bounds, clamp_to_bounds=clamp_waypoints)
        self.drone = Drone(env.start, params=self.params, config=self.config)
        self.trial: Optional[TrialMonitor] = None
        self.commands: list[tuple[float, dict]] = []  # full inbound record

        self._rng = np.random.default_rng(seed)
        self._tick = 0
        self._hold_ticks = max(1, int(round(DISTURB_HOLD / self.config.dt)))
        self._disturb_dir = ZERO
        self._autopilot = False

    @property
    def t(self) -> float:
        return self._tick * self.config.dt

    # ------------------------------------------------------------------ state

    def observation(self) -> Observation:
        return Observation(
            t=self.t,
            drone=self.drone.state.snapshot(),
            path_revision=self.path.revision,
            env=self.env,
            spec=self.trial.spec if self.trial else None,
            progress=self.trial.progress if self.trial else 0,
            trial_active=self.trial is not None and not self.trial.finished,
        )

    def state_payload(self) -> dict:
        st = self.drone.state
        trial = None
        if self.trial is not None:
            trial = {
                "sequence": list(self.trial.spec.sequence),
                "interface": self.trial.spec.interface_tag,
                "progress": self.trial.progress,
                "outcome": self.trial.outcome,
            }
        return {
            "t": self.t,
            "pos": [st.position.x, st.position.y, st.position.z],
            "vel": [st.velocity.x, st.velocity.y, st.velocity.z],
            "mode": st.mode.value,
            "revision": self.path.revision,
            "trial": trial,
        }

    def env_payload(self) -> dict:
        return self.env.to_dict()

    def path_payload(self) -> dict:
        return self.path.snapshot()

    # -------------------------------------------------------------- commands

    def start_trial(self, spec: TrialSpec, meta: Optional[dict] = None) -> TrialMonitor:
        if self.trial is not None and not self.trial.finished:
            raise FlightdeckError("a trial is already active")
        self.env.hoop(spec.sequence[0])  # validates labels via TrialSpec+env
        self.trial = TrialMonitor(
            spec,
            self.env,
            start_t=self.t,
            ground_window=self.ground_window,
            timeout=self.trial_timeout,
            meta={
                "seed": self.seed,
                "disturb_scale": self.disturb_scale,
                "start": list(self.env.start),
                **(meta or {}),
            },
        )
        return self.trial

    def _replan(self) -> None:
        """Refresh the flown trajectory after a path edit while airborne."""
        if self.drone.mode is not Mode.FLYING or not self._autopilot:
            return
        if len(self.path) == 0:
            self.drone.clear_trajectory()
            return
        points = [self.drone.position] + self.path.positions()
        self.drone.follow(vehicle.plan_trajectory(points, self.config.v_plan))

    def apply(self, cmd: dict) -> dict:
        """Apply one command payload; returns {"ok": {...}} or {"error": {...}}.

        Commands are recorded (and logged into an active trial) whether they
        succeed or not, so replays reproduce error paths too.
        """
        self.commands.append((self.t, dict(cmd)))
        if self.trial is not None:
            self.trial.record(self.t, "command", dict(cmd))
        try:
            return {"ok": self._dispatch(cmd)}
        except ProtocolError as exc:
            return {"error": {"code": exc.code, "detail": exc.detail}}
        except FlightdeckError as exc:
            return {"error": {"code": exc.code, "detail": str(exc)}}

    def _dispatch(self, cmd: dict) -> dict:
        ctype = cmd.get("type")
        if ctype == "add_waypoint":
            pos = _vec3_field(cmd, "pos")
            after = cmd.get("after")
            wp = self.path.add_waypoint(pos, after=after)
            return self._edited({"id": wp.id})
        if ctype == "add_waypoint_indirect":
            wp = self.path.add_waypoint_indirect(
                _ray_field(cmd, "pick_ray"), _ray_field(cmd, "tilt_ray")
            )
            return self._edited({"id": wp.id})
        if ctype == "move_waypoint":
            self.path.move_waypoint(_int_field(cmd, "id"), _vec3_field(cmd, "pos"))
            return self._edited()
        if ctype == "delete_waypoint":
            self.path.delete_waypoint(_int_field(cmd, "id"))
            return self._edited()
        if ctype == "takeoff":
            self.drone.takeoff()
            self._autopilot = True
            if self.trial is not None:
                self.trial.record(self.t, "takeoff")
            return {"mode": self.drone.mode.value}
        if ctype == "land":
            self.drone.land()
            if self.trial is not None:
                self.trial.record(self.t, "land")
            return {"mode": self.drone.mode.value}
        if ctype == "joystick":
            stick = JoystickInput(
                _num_field(cmd, "dx"), _num_field(cmd, "dy"), _num_field(cmd, "dz")
            )
            self._autopilot = False
            sp = self.drone.joystick(stick, self.env.bounds)
            return {"setpoint": [sp.x, sp.y, sp.z]}
        if ctype == "start_trial":
            seq = cmd.get("sequence")
            if not (isinstance(seq, list) and seq):
                raise ProtocolError("sequence must be a nonempty list", "bad_payload")
            spec = TrialSpec(tuple(seq), cmd.get("interface_tag", "VR"))
            self.start_trial(spec)
            return {"trial": spec.name}
        raise ProtocolError(f"unknown command type {ctype!r}", "unknown_type")

    def _edited(self, extra: Optional[dict] = None) -> dict:
        if self.trial is not None:
            self.trial.record(self.t, "path_edit", {"revision": self.path.revision})
        self._replan()
        return {"revision": self.path.revision, **(extra or {})}

    # ------------------------------------------------------------------ time

    def tick(self) -> None:
        """Advance the simulation one step and feed the trial monitor."""
        if self._tick % self._hold_ticks == 0:
            v = self._rng.standard_normal(3)
            n = math.sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])
            self._disturb_dir = Vec3(v[0] / n, v[1] / n, v[2] / n) if n > 1e-12 else ZERO
        disturbance = self._disturb_dir * self.disturb_scale
        prev_pos = self.drone.position
        before, after = self.drone.step(self.config.dt, disturbance)
        if before is Mode.TAKING_OFF and after is Mode.FLYING:
            if self._autopilot and len(self.path) > 0:
                points = [self.drone.position] + self.path.positions()
                self.drone.follow(vehicle.plan_trajectory(points, self.config.v_plan))
        self._tick += 1
        if self.trial is not None and not self.trial.finished:
            self.trial.on_tick(self.t, self.drone.state, prev_pos)


def _vec3_field(cmd: dict, key: str) -> Vec3:
    v = cmd.get(key)
    try:
        return Vec3.of(v)
    except (TypeError, ValueError) as exc:
        raise ProtocolError(f"{key} must be a list of 3 numbers", "bad_payload") from exc


def _ray_field(cmd: dict, key: str) -> Ray:
    r = cmd.get(key)
    if not isinstance(r, dict):
        raise ProtocolError(f"{key} must be an object", "bad_payload")
    try:
        return Ray.aim(Vec3.of(r["origin"]), Vec3.of(r["direction"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ProtocolError(f"{key} must hold origin and direction vectors", "bad_payload") from exc


def _int_field(cmd: dict, key: str) -> int:
    v = cmd.get(key)
    if not (isinstance(v, int) and not isinstance(v, bool)):
        raise ProtocolError(f"{key} must be an integer", "bad_payload")
    return v


def _num_field(cmd: dict, key: str) -> float:
    v = cmd.get(key)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ProtocolError(f"{key} must be a number", "bad_payload")
    return float(v)
