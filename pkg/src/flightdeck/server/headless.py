"""Headless trial execution: runs trials faster than real time, writes logs.

Outputs per run: one JSONL event log per trial plus a summary CSV with one
row per trial (subject/agent, condition, planning time, crashes, success).
Reruns with the same inputs are byte-identical.
"""

from __future__ import annotations

import csv
import sys
from pathlib import Path
from typing import Optional, Sequence, Union

from ..errors import ConfigError, FlightdeckError
from ..stats.metrics import summary_row
from ..tasks.agents import AGENTS, make_agent
from ..tasks.environment import LabEnvironment, TrialSpec, load_environment
from ..tasks.trial import run_trial

SUMMARY_FIELDS = ["subject", "condition", "sequence", "planning_time", "crashes", "success"]

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_UNKNOWN_AGENT = 2


def run_headless(
    env_file: Union[str, Path, LabEnvironment],
    trial_set: Optional[Sequence[TrialSpec]] = None,
    agent_name: str = "oracle",
    seed: int = 0,
    out_dir: Union[str, Path] = ".",
    *,
    stderr=sys.stderr,
) -> int:
    """Execute a trial set and persist logs + summary; returns an exit code."""
    if agent_name not in AGENTS:
        print(f"error: unknown agent {agent_name!r}; known: {sorted(AGENTS)}", file=stderr)
        return EXIT_UNKNOWN_AGENT
    try:
        if isinstance(env_file, LabEnvironment):
            env = env_file
        else:
            env = load_environment(env_file)
        specs = tuple(trial_set) if trial_set is not None else env.trials
        if not specs:
            raise ConfigError("no trials defined (environment has an empty trial list)")
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)

        rows = []
        for i, spec in enumerate(specs):
            agent = make_agent(agent_name)
            log = run_trial(
                spec,
                agent,
                env,
                seed=seed + i,
                agent_name=agent_name,
            )
            log.save(out / f"trial_{i:02d}_{spec.name}.jsonl")
            rows.append(summary_row(log, subject=agent_name))

        with open(out / "summary.csv", "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=SUMMARY_FIELDS)
            writer.writeheader()
            writer.writerows(rows)
    except (ConfigError, FlightdeckError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_CONFIG
    return EXIT_OK
