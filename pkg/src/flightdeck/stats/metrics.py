"""Per-trial measures extracted from event logs.

Planning time is operationalized as the non-airborne portion of the trial:
the clock runs from trial start (and again from each land command) until the
next takeoff, so time spent flying does not count as planning interaction.
"""

from __future__ import annotations

from ..errors import IncompleteLog
from ..tasks.events import TrialLog


def planning_time(log: TrialLog) -> float:
    """Seconds spent grounded or landing within the trial."""
    end = log.end_event  # raises IncompleteLog when the trial never finished
    total = 0.0
    mark = 0.0
    airborne = False
    for ev in log.events:
        if ev.kind == "takeoff" and not airborne:
            total += ev.t - mark
            airborne = True
        elif ev.kind == "land" and airborne:
            mark = ev.t
            airborne = False
    if not airborne:
        total += end.t - mark
    return total


def crash_count(log: TrialLog) -> int:
    return len(log.of_kind("crash"))


def succeeded(log: TrialLog) -> bool:
    return log.end_event.payload.get("outcome") == "success"


def trial_duration(log: TrialLog) -> float:
    return log.end_event.t


def traversal_labels(log: TrialLog) -> list[str]:
    return [e.payload["label"] for e in log.of_kind("traversal")]


def summary_row(log: TrialLog, subject: str) -> dict:
    """One summary-CSV row for a finished trial."""
    meta = log.events[0].payload if log.events and log.events[0].kind == "meta" else {}
    return {
        "subject": subject,
        "condition": meta.get("interface", ""),
        "sequence": "-".join(meta.get("sequence", [])),
        "planning_time": planning_time(log),
        "crashes": crash_count(log),
        "success": int(succeeded(log)),
    }
