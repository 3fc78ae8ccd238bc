"""Scripted agents for headless trials.

Agents speak the same command surface as the wire protocol: each step they
may emit payload dicts like {"type": "add_waypoint", "pos": [...]}.
"""

from __future__ import annotations

from typing import Iterable, Optional

from ..geometry import Vec3
from .events import Event, TrialLog
from .trial import Observation

ENTRY_STANDOFF = 0.5  # m before/after each hoop center along its normal


class OracleAgent:
    """Plans a clean route: entry/exit waypoints through every required hoop.

    For each hoop the traversal side is chosen to minimize the turn angle at
    the entry waypoint (either side is a valid traversal), then the path is
    flown with a single launch command.
    """

    def __init__(self):
        self._planned = False

    def step(self, obs: Observation) -> Iterable[dict]:
        if self._planned or obs.spec is None:
            return []
        self._planned = True
        cmds = []
        current = obs.drone.position
        for label in obs.spec.sequence:
            hoop = obs.env.hoop(label)
            best = None
            for side in (1.0, -1.0):
                travel = hoop.normal * side
                entry = hoop.center - travel * ENTRY_STANDOFF
                approach = entry - current
                dist = approach.norm()
                align = 1.0 if dist < 1e-9 else approach.dot(travel) / dist
                if best is None or align > best[0]:
                    best = (align, entry, hoop.center + travel * ENTRY_STANDOFF)
            _, entry, exit_ = best
            cmds.append({"type": "add_waypoint", "pos": [entry.x, entry.y, entry.z]})
            cmds.append({"type": "add_waypoint", "pos": [exit_.x, exit_.y, exit_.z]})
            current = exit_
        cmds.append({"type": "takeoff"})
        return cmds


class NullAgent:
    """Does nothing; the trial runs out its timeout."""

    def step(self, obs: Observation) -> Iterable[dict]:
        return []


class ReplayAgent:
    """Re-issues the command events of a recorded log at their recorded times."""

    def __init__(self, commands: list[Event]):
        self._commands = sorted(commands, key=lambda e: e.t)
        self._idx = 0

    @staticmethod
    def from_log(log: TrialLog) -> "ReplayAgent":
        return ReplayAgent(log.of_kind("command"))

    def step(self, obs: Observation) -> Iterable[dict]:
        out = []
        while self._idx < len(self._commands) and self._commands[self._idx].t <= obs.t:
            out.append(dict(self._commands[self._idx].payload))
            self._idx += 1
        return out


AGENTS = {
    "oracle": OracleAgent,
    "null": NullAgent,
}


def make_agent(name: str):
    try:
        return AGENTS[name]()
    except KeyError:
        raise KeyError(f"unknown agent {name!r}; known: {sorted(AGENTS)}") from None
