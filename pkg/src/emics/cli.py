"""Command-line interface: run trials, compute metrics, calibrate, replay,
serve the live gateway, and export built-in scenarios."""

from __future__ import annotations

import csv
import glob
import json
import os
import sys

import click

from . import presets
from .calibration import CalibrationConfig, grid_search
from .model import ControlMode, RunLog, canonical_dumps
from .operators import OperatorProfile
from .runner import (
    CSV_COLUMNS,
    ReplayError,
    compute_metrics,
    metrics_csv_row,
    replay as replay_log,
    run_scenario,
)
from .scenario import Scenario

MODE_NAMES = {m.value: m for m in ControlMode}


def _load_scenario(ref: str, seed: int = None) -> Scenario:
    """A scenario file path or a preset name."""
    if os.path.exists(ref):
        scenario = Scenario.load(ref)
        if seed is not None and seed != scenario.seed:
            scenario = Scenario.from_json({**scenario.to_json(), "seed": seed})
        return scenario
    if ref in presets.PRESETS:
        return presets.build(ref, seed=seed or 0)
    raise click.ClickException(
        f"{ref!r} is neither a scenario file nor a preset "
        f"(presets: {', '.join(sorted(presets.PRESETS))})")


@click.group()
def main():
    """Variable-autonomy control stack: expert-guided LOA switching."""


@main.command()
@click.option("--scenario", "scenario_ref", required=True,
              help="Scenario JSON file or preset name.")
@click.option("--mode", type=click.Choice(sorted(MODE_NAMES)), required=True)
@click.option("--profile", "profile_path", type=click.Path(exists=True),
              help="Operator profile JSON (defaults to the scenario's).")
@click.option("--seed", type=int, default=None)
@click.option("--out", "out_dir", type=click.Path(), default=".",
              help="Directory receiving the run log.")
@click.option("--figures", is_flag=True, help="Render report figures too.")
def run(scenario_ref, mode, profile_path, seed, out_dir, figures):
    """Run one scenario under a control mode and write its log."""
    scenario = _load_scenario(scenario_ref, seed)
    profile = None
    if profile_path:
        with open(profile_path) as f:
            profile = OperatorProfile.from_json(json.load(f))
    log = run_scenario(scenario, MODE_NAMES[mode], profile=profile)
    os.makedirs(out_dir, exist_ok=True)
    stem = f"{scenario.scenario_id}-{mode}-seed{scenario.seed}"
    log_path = os.path.join(out_dir, stem + ".jsonl")
    log.save(log_path)
    metrics = compute_metrics(log)
    click.echo(f"log: {log_path}")
    click.echo(canonical_dumps(metrics.to_json(), indent=2))
    if figures:
        from .figures import plot_run
        for path in plot_run(log, out_dir, stem=stem):
            click.echo(f"figure: {path}")


@main.command()
@click.option("--log", "log_path", type=click.Path(exists=True), required=True)
@click.option("--csv", "csv_path", type=click.Path(), default=None,
              help="Append a metrics row to this CSV (header added if new).")
@click.option("--figures", "figures_dir", type=click.Path(), default=None,
              help="Render trajectory and error-trace figures into a directory.")
def metrics(log_path, csv_path, figures_dir):
    """Compute the performance metrics of a run log."""
    log = RunLog.load(log_path)
    m = compute_metrics(log)
    click.echo(canonical_dumps(m.to_json(), indent=2))
    if csv_path:
        exists = os.path.exists(csv_path)
        with open(csv_path, "a", newline="") as f:
            writer = csv.writer(f)
            if not exists:
                writer.writerow(CSV_COLUMNS)
            writer.writerow(metrics_csv_row(log, m))
        click.echo(f"csv: {csv_path}")
    if figures_dir:
        from .figures import plot_run
        for path in plot_run(log, figures_dir):
            click.echo(f"figure: {path}")


@main.command()
@click.option("--logs", "logs_dir", type=click.Path(exists=True), required=True,
              help="Directory of run-log .jsonl files.")
@click.option("--config", "config_path", type=click.Path(exists=True),
              required=True, help="CalibrationConfig JSON.")
@click.option("--out", "out_csv", type=click.Path(), default="calibration.csv")
@click.option("--figures", "figures_dir", type=click.Path(), default=None)
def calibrate(logs_dir, config_path, out_csv, figures_dir):
    """Grid-search (alpha, threshold) against operator switches in the logs."""
    with open(config_path) as f:
        cfg = CalibrationConfig.from_json(json.load(f))
    paths = sorted(glob.glob(os.path.join(logs_dir, "*.jsonl")))
    if not paths:
        raise click.ClickException(f"no .jsonl logs under {logs_dir}")
    logs = [RunLog.load(p) for p in paths]
    alpha, threshold, total, rows = grid_search(logs, cfg)
    with open(out_csv, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["alpha", "threshold", "totalCost"])
        writer.writerows(rows)
    click.echo(f"csv: {out_csv} ({len(rows)} cells over {len(logs)} logs)")
    click.echo(f"argmin: alpha={alpha} threshold={threshold} totalCost={total:.3f}")
    if figures_dir:
        from .figures import plot_calibration
        os.makedirs(figures_dir, exist_ok=True)
        path = plot_calibration(rows, (alpha, threshold, total),
                                os.path.join(figures_dir, "calibration-cost.png"))
        click.echo(f"figure: {path}")


@main.command()
@click.option("--log", "log_path", type=click.Path(exists=True), required=True)
def replay(log_path):
    """Re-simulate a log from its header and verify byte-identity."""
    log = RunLog.load(log_path)
    try:
        replay_log(log)
    except ReplayError as exc:
        raise click.ClickException(str(exc))
    click.echo(f"replay ok: {len(log.records)} ticks reproduced byte-identically")


@main.command()
@click.option("--scenario", "scenario_ref", required=True)
@click.option("--mode", type=click.Choice(sorted(MODE_NAMES)), required=True)
@click.option("--port", type=int, default=8750)
@click.option("--seed", type=int, default=None)
def serve(scenario_ref, mode, port, seed):
    """Serve a live simulation for the operator control UI."""
    from .gateway import serve_forever
    scenario = _load_scenario(scenario_ref, seed)
    click.echo(f"gateway on ws://0.0.0.0:{port}: scenario "
               f"{scenario.scenario_id}, mode {mode}")
    serve_forever(scenario, MODE_NAMES[mode], port)


@main.command()
@click.argument("name", type=click.Choice(sorted(presets.PRESETS)))
@click.option("--seed", type=int, default=0)
@click.option("--out", "out_path", type=click.Path(), default=None)
def scenario(name, seed, out_path):
    """Export a built-in scenario to JSON."""
    s = presets.build(name, seed=seed)
    out_path = out_path or f"{s.scenario_id}.json"
    s.save(out_path)
    click.echo(f"scenario: {out_path}")


if __name__ == "__main__":
    sys.exit(main())
