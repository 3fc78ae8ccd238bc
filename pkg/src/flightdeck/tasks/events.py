"""Trial event log: the timestamped record every metric is computed from.

Logs are append-only, time-ordered, and persist as line-delimited JSON with
one {t, kind, payload} object per line.  Event kinds:

- ``meta``: trial header (seed, environment, spec, sim constants)
- ``command``: an inbound command as applied (drives deterministic replay)
- ``path_edit``: successful path mutation, payload carries the new revision
- ``takeoff`` / ``land``: accepted launch/land commands
- ``traversal``: hoop crossing, payload {label, direction}
- ``collision``: contact onset, payload {kind, hoop}
- ``crash``: crash declaration, payload {definition}
- ``trial_end``: exactly one per finished log, payload {outcome, reason}
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Union

from ..errors import IncompleteLog


@dataclass(frozen=True)
class Event:
    t: float
    kind: str
    payload: dict


class TrialLog:
    """Append-only, time-ordered event stream for one trial."""

    def __init__(self, events: Optional[Iterable[Event]] = None):
        self._events: list[Event] = []
        self._ended = False
        for ev in events or ():
            self.append(ev.t, ev.kind, ev.payload)

    def append(self, t: float, kind: str, payload: Optional[dict] = None) -> Event:
        if self._ended:
            raise ValueError("trial log already ended")
        if self._events and t < self._events[-1].t:
            raise ValueError("event timestamps must be nondecreasing")
        ev = Event(float(t), kind, dict(payload or {}))
        self._events.append(ev)
        if kind == "trial_end":
            self._ended = True
        return ev

    @property
    def events(self) -> tuple[Event, ...]:
        return tuple(self._events)

    @property
    def ended(self) -> bool:
        return self._ended

    def __len__(self) -> int:
        return len(self._events)

    def of_kind(self, kind: str) -> list[Event]:
        return [e for e in self._events if e.kind == kind]

    @property
    def end_event(self) -> Event:
        if not self._ended:
            raise IncompleteLog("log has no trial_end event")
        return self._events[-1]

    def to_jsonl(self) -> str:
        lines = [
            json.dumps({"t": e.t, "kind": e.kind, "payload": e.payload}, sort_keys=True)
            for e in self._events
        ]
        return "\n".join(lines) + "\n"

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.to_jsonl(), encoding="utf-8")

    @staticmethod
    def from_jsonl(text: str) -> "TrialLog":
        log = TrialLog()
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            log.append(rec["t"], rec["kind"], rec.get("payload", {}))
        return log

    @staticmethod
    def load(path: Union[str, Path]) -> "TrialLog":
        return TrialLog.from_jsonl(Path(path).read_text(encoding="utf-8"))
