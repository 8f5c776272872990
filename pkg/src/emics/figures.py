"""Matplotlib report figures rendered next to the delimited outputs."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .model import Initiator, LoaMode, RunLog
from .scenario import Scenario

FIGSIZE = (9.0, 5.0)
DPI = 130


def _map_extent(scenario: Scenario):
    grid = scenario.static_map
    return (grid.origin.x, grid.origin.x + grid.width * grid.resolution,
            grid.origin.y, grid.origin.y + grid.height * grid.resolution)


def plot_trajectory(log: RunLog, path: str) -> str:
    """Map view: static walls, true obstacles, driven path, goals, switches."""
    scenario = Scenario.from_json(log.config["scenario"])
    grid = scenario.static_map
    fig, ax = plt.subplots(figsize=(8, 8 * grid.height / grid.width), dpi=DPI)
    ax.imshow(grid.cells, origin="lower", extent=_map_extent(scenario),
              cmap="gray_r", interpolation="nearest", alpha=0.9)
    for rect in scenario.true_obstacles:
        ax.add_patch(plt.Rectangle((rect.x, rect.y), rect.w, rect.h,
                                   color="tab:red", alpha=0.5, label=None))
    for region in scenario.noise_regions:
        r = region.rect
        ax.add_patch(plt.Rectangle((r.x, r.y), r.w, r.h,
                                   color="gold", alpha=0.25))

    xs = [r.true_pose.x for r in log.records]
    ys = [r.true_pose.y for r in log.records]
    loa = [r.loa for r in log.records]
    colors = np.where([m is LoaMode.AUTONOMY for m in loa], "tab:green", "tab:blue")
    ax.scatter(xs, ys, c=colors, s=2.0, linewidths=0)
    ax.plot(scenario.start.x, scenario.start.y, "k^", markersize=9, label="start")
    for i, g in enumerate(scenario.goals):
        ax.plot(g.x, g.y, "r*", markersize=12,
                label="goal" if i == 0 else None)
    for sw in log.switches:
        rec = min(log.records, key=lambda r: abs(r.t - sw.t))
        marker = "o" if sw.initiator is Initiator.OPERATOR else "s"
        ax.plot(rec.true_pose.x, rec.true_pose.y, marker, color="magenta",
                markersize=7, fillstyle="none")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.set_title(f"{log.scenario_id} / {log.control_mode.value} "
                 f"(blue teleop, green autonomy)")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_error_trace(log: RunLog, path: str, threshold: float = 0.07) -> str:
    """Filtered/raw error against time with the switch threshold and LOA band."""
    t = np.array([r.t for r in log.records])
    e_raw = np.array([r.e_raw for r in log.records])
    e_f = np.array([r.e_filtered for r in log.records])
    autonomy = np.array([r.loa is LoaMode.AUTONOMY for r in log.records])

    fig, ax = plt.subplots(figsize=FIGSIZE, dpi=DPI)
    ax.fill_between(t, 0, 0.1, where=autonomy, color="tab:green", alpha=0.12,
                    step="post", label="autonomy LOA")
    ax.plot(t, e_raw, color="0.7", linewidth=0.6, label="raw error")
    ax.plot(t, e_f, color="tab:blue", linewidth=1.4, label="filtered error")
    ax.axhline(threshold, color="tab:red", linestyle="--", linewidth=1.0,
               label=f"threshold {threshold}")
    for sw in log.switches:
        color = "magenta" if sw.initiator is Initiator.EMICS else "black"
        ax.axvline(sw.t, color=color, linewidth=0.8, alpha=0.7)
    ax.set_xlabel("t [s]")
    ax.set_ylabel("error [m/s]")
    ax.set_ylim(0, 0.105)
    ax.set_title(f"goal-directed motion error: {log.scenario_id} "
                 f"/ {log.control_mode.value}")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_run(log: RunLog, outdir: str, stem: str = None) -> list:
    os.makedirs(outdir, exist_ok=True)
    stem = stem or f"{log.scenario_id}-{log.control_mode.value}"
    return [
        plot_trajectory(log, os.path.join(outdir, f"{stem}-trajectory.png")),
        plot_error_trace(log, os.path.join(outdir, f"{stem}-error.png")),
    ]


def plot_calibration(rows, best, path: str) -> str:
    """Cost heatmap over the (alpha, threshold) grid with the argmin marked."""
    alphas = sorted({a for a, _, _ in rows})
    thresholds = sorted({th for _, th, _ in rows})
    cost = np.full((len(alphas), len(thresholds)), np.nan)
    for a, th, j in rows:
        cost[alphas.index(a), thresholds.index(th)] = j

    fig, ax = plt.subplots(figsize=FIGSIZE, dpi=DPI)
    im = ax.imshow(cost, origin="lower", aspect="auto", cmap="viridis",
                   extent=(thresholds[0], thresholds[-1], alphas[0], alphas[-1]))
    ax.plot(best[1], best[0], "r*", markersize=14,
            label=f"argmin α={best[0]:.3g}, thr={best[1]:.3g}")
    fig.colorbar(im, ax=ax, label="total cost [s]")
    ax.set_xlabel("threshold [m/s]")
    ax.set_ylabel("alpha")
    ax.set_title("switch-prediction cost over the calibration grid")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
