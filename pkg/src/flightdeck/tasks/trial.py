"""Trial execution: sequence tracking, crash declaration, success/failure.

A trial lasts until the vehicle crashes (either definition), the required
hoop sequence is completed in order, or the timeout elapses.  The monitor is
driven once per simulation tick and owns the trial's event log; timestamps
are relative to trial start.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Protocol

from ..geometry import Vec3
from ..vehicle import DroneState
from .detection import (
    DEFAULT_GROUND_WINDOW,
    classify_crash,
    detect_collisions,
    detect_traversal,
)
from .environment import LabEnvironment, TrialSpec
from .events import TrialLog

DEFAULT_TIMEOUT = 300.0  # s simulated


@dataclass(frozen=True)
class Observation:
    """What an agent sees each tick: the same data the wire protocol carries."""

    t: float
    drone: DroneState
    path_revision: int
    env: LabEnvironment
    spec: Optional[TrialSpec]
    progress: int
    trial_active: bool


class Agent(Protocol):
    """Scripted pilot: consumes observations, emits wire-shaped command payloads."""

    def step(self, obs: Observation) -> Iterable[dict]: ...


class TrialMonitor:
    """Tracks one trial: traversal progress, collisions, crash calls, outcome."""

    def __init__(
        self,
        spec: TrialSpec,
        env: LabEnvironment,
        *,
        start_t: float = 0.0,
        ground_window: float = DEFAULT_GROUND_WINDOW,
        timeout: float = DEFAULT_TIMEOUT,
        meta: Optional[dict] = None,
    ):
        self.spec = spec
        self.env = env
        self.start_t = start_t
        self.ground_window = ground_window
        self.timeout = timeout
        self.log = TrialLog()
        self.progress = 0
        self.outcome: Optional[str] = None
        self._contacts: frozenset = frozenset()
        header = {
            "sequence": list(spec.sequence),
            "interface": spec.interface_tag,
            "ground_window": ground_window,
            "timeout": timeout,
        }
        header.update(meta or {})
        self.log.append(0.0, "meta", header)

    @property
    def finished(self) -> bool:
        return self.outcome is not None

    def rel(self, t: float) -> float:
        return t - self.start_t

    def record(self, t: float, kind: str, payload: Optional[dict] = None) -> None:
        if not self.finished:
            self.log.append(self.rel(t), kind, payload)

    def _end(self, t_rel: float, outcome: str, reason: str) -> None:
        self.outcome = outcome
        self.log.append(t_rel, "trial_end", {"outcome": outcome, "reason": reason})

    def on_tick(self, t: float, state: DroneState, prev_pos: Vec3) -> None:
        """Process one completed simulation step ending at absolute time t."""
        if self.finished:
            return
        t_rel = self.rel(t)
        if t_rel >= self.timeout:
            self._end(t_rel, "failure", "timeout")
            return

        contacts = frozenset(detect_collisions(state, self.env))
        for c in sorted(contacts - self._contacts, key=lambda c: (c.kind, c.hoop or "")):
            self.log.append(t_rel, "collision", {"kind": c.kind, "hoop": c.hoop})
        self._contacts = contacts

        crash = classify_crash(self.log.events, self.ground_window)
        if crash is not None:
            # Crash ends the trial immediately; traversals this tick are discarded.
            self.log.append(t_rel, "crash", {"definition": crash.definition})
            self._end(t_rel, "failure", f"crash_definition_{crash.definition}")
            return

        for hoop in self.env.hoops:
            direction = detect_traversal(prev_pos, state.position, hoop, state.body_radius)
            if direction is None:
                continue
            self.log.append(t_rel, "traversal", {"label": hoop.label, "direction": direction})
            if self.progress < len(self.spec.sequence) and hoop.label == self.spec.sequence[self.progress]:
                self.progress += 1
        if self.progress == len(self.spec.sequence):
            self._end(t_rel, "success", "sequence_complete")


def sequence_satisfied(traversed: Iterable[str], required: Iterable[str]) -> bool:
    """True when the required labels appear in order within the traversal list."""
    need = list(required)
    i = 0
    for label in traversed:
        if i < len(need) and label == need[i]:
            i += 1
    return i == len(need)


def run_trial(
    spec: TrialSpec,
    agent: Agent,
    env: LabEnvironment,
    seed: int = 0,
    *,
    params=None,
    config=None,
    disturb_scale: Optional[float] = None,
    ground_window: float = DEFAULT_GROUND_WINDOW,
    timeout: float = DEFAULT_TIMEOUT,
    agent_name: Optional[str] = None,
) -> TrialLog:
    """Run one trial headlessly and return its event log.

    The agent is invoked synchronously each tick with an Observation and may
    return command payloads, which are applied in order before the step.
    Identical inputs (spec, agent behavior, seed) reproduce identical logs.
    """
    from ..server.session import Session  # deferred: server builds on tasks

    session = Session(
        env,
        seed=seed,
        params=params,
        config=config,
        disturb_scale=disturb_scale,
        ground_window=ground_window,
        trial_timeout=timeout,
    )
    session.start_trial(spec, meta={"seed": seed, "agent": agent_name or type(agent).__name__})
    assert session.trial is not None
    while not session.trial.finished:
        for cmd in agent.step(session.observation()) or ():
            session.apply(cmd)
        session.tick()
    return session.trial.log
