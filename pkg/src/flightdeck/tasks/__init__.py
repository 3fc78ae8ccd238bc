"""Evaluation harness: lab environment, hoop tasks, trials, agents, logging."""

from .agents import AGENTS, NullAgent, OracleAgent, ReplayAgent, make_agent
from .detection import (
    BODY_HOOP,
    DEFAULT_GROUND_WINDOW,
    GROUND,
    ROTOR_HOOP,
    Collision,
    CrashCall,
    classify_crash,
    detect_collisions,
    detect_traversal,
    point_circle_distance,
)
from .environment import (
    Hoop,
    LabEnvironment,
    TrialSpec,
    default_environment,
    load_environment,
    save_environment,
)
from .events import Event, TrialLog
from .trial import (
    DEFAULT_TIMEOUT,
    Agent,
    Observation,
    TrialMonitor,
    run_trial,
    sequence_satisfied,
)

__all__ = [
    "AGENTS",
    "Agent",
    "BODY_HOOP",
    "Collision",
    "CrashCall",
    "DEFAULT_GROUND_WINDOW",
    "DEFAULT_TIMEOUT",
    "Event",
    "GROUND",
    "Hoop",
    "LabEnvironment",
    "NullAgent",
    "Observation",
    "OracleAgent",
    "ROTOR_HOOP",
    "ReplayAgent",
    "TrialLog",
    "TrialMonitor",
    "TrialSpec",
    "classify_crash",
    "default_environment",
    "detect_collisions",
    "detect_traversal",
    "load_environment",
    "make_agent",
    "point_circle_distance",
    "run_trial",
    "save_environment",
    "sequence_satisfied",
]
