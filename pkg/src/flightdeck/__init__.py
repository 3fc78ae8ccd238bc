"""Ground-control path planning, simulation and evaluation platform.

Subsystems:

- ``geometry``: 3D interaction math (rays, ground picking, view transforms).
- ``flightpath``: the waypoint path model and its edit operations.
- ``vehicle``: simulated quadrotor, PD tracker, tracking-error-bound sweep.
- ``tasks``: hoop-navigation trials, crash semantics, agents, event logs.
- ``stats``: experiment metrics and the analysis pipeline (RM-ANOVA,
  Tukey HSD, Cronbach's alpha) with self-contained distribution functions.
- ``server``: wire protocol, live session service, headless runner, CLI.
"""

__version__ = "0.1.0"
