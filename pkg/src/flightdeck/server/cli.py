"""Command-line entry points: serve, trial, stats, replay."""

from __future__ import annotations

import asyncio
import sys
from pathlib import Path

import click

from ..errors import ConfigError, FlightdeckError
from ..stats import report
from ..tasks.agents import ReplayAgent
from ..tasks.environment import TrialSpec, default_environment, load_environment
from ..tasks.events import TrialLog
from ..tasks.trial import run_trial
from .headless import run_headless
from .service import SessionService
from .session import Session

DEFAULT_PORT = 8765


def _load_env(env_path):
    if env_path is None:
        return default_environment()
    return load_environment(env_path)


@click.group()
def main():
    """Ground-control platform: serve interfaces, run trials, analyze results."""


@main.command()
@click.option("--port", type=int, envvar="FLIGHTDECK_PORT", default=DEFAULT_PORT, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--env", "env_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--speed", type=float, default=1.0, show_default=True, help="Sim speed multiplier.")
def serve(port, host, env_path, speed):
    """Run the live session server for interface clients."""
    try:
        env = _load_env(env_path)
    except ConfigError as exc:
        raise click.ClickException(str(exc))
    session = Session(env)
    service = SessionService(session, host=host, port=port, speed=speed)
    click.echo(f"serving on ws://{host}:{port} (speed {speed}x, token {service.token})")

    async def _run():
        await service.run()

    try:
        asyncio.run(_run())
    except KeyboardInterrupt:
        pass


@main.command()
@click.option("--env", "env_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--agent", "agent_name", default="oracle", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
def trial(env_path, agent_name, seed, out_dir):
    """Run the environment's trial set headlessly and write logs + summary."""
    env = default_environment() if env_path is None else env_path
    code = run_headless(env, None, agent_name, seed, out_dir)
    sys.exit(code)


@main.command()
@click.option("--in", "in_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option(
    "--measure",
    type=click.Choice(["planning_time", "crashes", "usability"]),
    required=True,
)
@click.option("--survey", "survey_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--plot-out", type=click.Path(dir_okay=False), default=None)
def stats(in_path, measure, survey_path, plot_out):
    """Analyze a measure: RM-ANOVA, Tukey post-hoc, report text."""
    try:
        if measure == "usability":
            if survey_path is None:
                raise ConfigError("--survey CSV required for the usability measure")
            rows = report.read_survey_csv(survey_path)
            table = report.usability_table(rows)
            alpha = report.survey_alpha(rows)
        else:
            if in_path is None:
                raise ConfigError("--in CSV required")
            tables = report.read_long_csv(in_path)
            if measure not in tables:
                raise ConfigError(f"measure {measure!r} not present in {in_path}")
            table = tables[measure]
            alpha = None
        text, anova, _tukey = report.analyze_measure(table, measure, alpha)
    except (ConfigError, FlightdeckError, ValueError) as exc:
        raise click.ClickException(str(exc))
    click.echo(text, nl=False)
    if plot_out:
        report.write_plot_csv(report.plot_data(anova, table.conditions), plot_out)
        click.echo(f"plot data written to {plot_out}")


@main.command()
@click.option("--log", "log_path", type=click.Path(exists=True, dir_okay=False), required=True)
def replay(log_path):
    """Re-run a recorded trial and verify the event stream is identical."""
    log = TrialLog.load(log_path)
    if not log.events or log.events[0].kind != "meta":
        raise click.ClickException("log has no meta header; cannot replay")
    meta = log.events[0].payload
    try:
        from ..tasks.environment import LabEnvironment

        env = LabEnvironment.from_dict(meta["env"]) if "env" in meta else default_environment()
        spec = TrialSpec(tuple(meta["sequence"]), meta.get("interface", "VR"))
        replayed = run_trial(
            spec,
            ReplayAgent.from_log(log),
            env,
            seed=int(meta.get("seed", 0)),
            disturb_scale=meta.get("disturb_scale"),
            ground_window=float(meta.get("ground_window", 2.0)),
            timeout=float(meta.get("timeout", 300.0)),
            agent_name=meta.get("agent", "replay"),
        )
    except (ConfigError, FlightdeckError, KeyError) as exc:
        raise click.ClickException(f"replay failed: {exc}")

    original = [(e.t, e.kind, e.payload) for e in log.events if e.kind != "meta"]
    rerun = [(e.t, e.kind, e.payload) for e in replayed.events if e.kind != "meta"]
    # The replayed meta names a different agent; every other event must match.
    if original == rerun:
        click.echo(f"MATCH: {len(rerun)} events reproduced bit-identically")
    else:
        for i, (a, b) in enumerate(zip(original, rerun)):
            if a != b:
                click.echo(f"MISMATCH at event {i}: {a} != {b}")
                break
        else:
            click.echo(f"MISMATCH: event counts differ ({len(original)} vs {len(rerun)})")
        sys.exit(1)


if __name__ == "__main__":
    main()
