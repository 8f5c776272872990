"""Scenario runner, performance metrics, and log replay."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errorsignal import ErrorFilterConfig
from .model import (
    ControlMode,
    Initiator,
    LoaMode,
    Pose,
    RunLog,
    Velocity,
)
from .operators import OperatorAction, OperatorProfile, ScriptedOperator
from .planner import PlannerConfig, plan_global
from .scenario import Scenario
from .simulator import SimConfig, Simulation
from .switchers import AuthorityPolicy, ThresholdSwitcherConfig

COLLISION_PENALTY = 10.0      # seconds added to the score per collision
COLLISION_DEBOUNCE = 1.0      # seconds; one scrape counts once
CONFIG_VERSION = 1

CSV_COLUMNS = ["scenarioId", "mode", "seed", "completionTime", "collisions",
               "score", "switchesTotal", "switchesOperator", "switchesEmics",
               "pctAutonomy"]


class ReplayError(Exception):
    """A log could not be reproduced from its own header."""


@dataclass
class Metrics:
    completion_time: float
    collisions: int
    score: float
    loa_switches_total: int
    by_operator: int
    by_emics: int
    pct_time_autonomy: float
    stuck_time: float
    complete: bool

    @property
    def pct_time_teleop(self) -> float:
        return 100.0 - self.pct_time_autonomy

    def to_json(self) -> dict:
        return {
            "completionTime": self.completion_time,
            "collisions": self.collisions,
            "score": self.score,
            "loaSwitchesTotal": self.loa_switches_total,
            "byOperator": self.by_operator,
            "byEmics": self.by_emics,
            "pctTimeAutonomy": self.pct_time_autonomy,
            "stuckTime": self.stuck_time,
            "complete": self.complete,
        }


def expert_traversal_estimate(scenario: Scenario,
                              planner_cfg: PlannerConfig) -> float:
    """Optimistic seconds to visit every goal: static path length at top speed."""
    total = 0.0
    origin = scenario.start
    for goal in scenario.goals:
        path = plan_global(scenario.static_map, origin, goal, planner_cfg)
        if path is None:
            return 30.0 * max(1, len(scenario.goals))
        total += path.remaining[0] / planner_cfg.v_max
        origin = goal
    return total + 5.0 * len(scenario.goals)


def default_timeout(scenario: Scenario, planner_cfg: PlannerConfig) -> float:
    return 4.0 * expert_traversal_estimate(scenario, planner_cfg)


def build_config(scenario: Scenario, profile: OperatorProfile,
                 sim_cfg: SimConfig, planner_cfg: PlannerConfig,
                 filter_cfg: ErrorFilterConfig,
                 threshold_cfg: ThresholdSwitcherConfig,
                 timeout: float, use_threshold_switcher: bool) -> dict:
    return {
        "version": CONFIG_VERSION,
        "scenario": scenario.to_json(),
        "profile": profile.to_json(),
        "sim": sim_cfg.to_json(),
        "planner": planner_cfg.to_json(),
        "filter": filter_cfg.to_json(),
        "thresholdSwitcher": threshold_cfg.to_json(),
        "timeout": timeout,
        "useThresholdSwitcher": use_threshold_switcher,
        "seed": scenario.seed,
    }


def run_scenario(scenario: Scenario, control_mode: ControlMode,
                 profile: OperatorProfile = None, seed: Optional[int] = None,
                 timeout: Optional[float] = None,
                 sim_cfg: SimConfig = None, planner_cfg: PlannerConfig = None,
                 filter_cfg: ErrorFilterConfig = None,
                 threshold_cfg: ThresholdSwitcherConfig = None,
                 use_threshold_switcher: bool = False) -> RunLog:
    """Run one trial to the final goal or timeout; deterministic under seed."""
    if seed is not None and seed != scenario.seed:
        scenario = Scenario.from_json({**scenario.to_json(), "seed": seed})
    profile = profile or scenario.operator_profile or OperatorProfile()
    sim_cfg = sim_cfg or SimConfig()
    planner_cfg = planner_cfg or PlannerConfig()
    filter_cfg = filter_cfg or ErrorFilterConfig()
    threshold_cfg = threshold_cfg or ThresholdSwitcherConfig()
    if timeout is None:
        timeout = default_timeout(scenario, planner_cfg)

    sim = Simulation(scenario, control_mode, sim_cfg=sim_cfg,
                     planner_cfg=planner_cfg, filter_cfg=filter_cfg,
                     threshold_cfg=threshold_cfg,
                     use_threshold_switcher=use_threshold_switcher)
    policy = AuthorityPolicy.for_mode(control_mode)
    operator = ScriptedOperator(profile, policy.operator_may_switch)

    log = RunLog(
        scenario_id=scenario.scenario_id,
        control_mode=control_mode,
        config=build_config(scenario, profile, sim_cfg, planner_cfg,
                            filter_cfg, threshold_cfg, timeout,
                            use_threshold_switcher),
    )
    while not sim.done and sim.t < timeout:
        obs = sim.observation()
        action = operator.act(obs, sim.t)
        log.records.append(sim.step(action))
    log.complete = sim.done
    return log


def _actions_from_record(record) -> OperatorAction:
    action = OperatorAction()
    for ev in record.events:
        kind = ev.get("kind")
        if kind == "operatorTeleop":
            action.teleop = Velocity(ev["linear"], ev["angular"])
        elif kind == "operatorSwitchRequest":
            action.request_switch = True
        elif kind == "setGoal":
            action.set_goal = Pose(ev["x"], ev["y"])
    return action


def replay(log: RunLog) -> RunLog:
    """Re-simulate a log from its recorded inputs; must match byte for byte."""
    cfg = log.config
    if cfg.get("version") != CONFIG_VERSION:
        raise ReplayError(
            f"log config version {cfg.get('version')!r} != {CONFIG_VERSION}")
    for key in ("scenario", "profile", "sim", "planner", "filter", "timeout"):
        if key not in cfg:
            raise ReplayError(f"log config lacks {key!r}; cannot replay")

    scenario = Scenario.from_json(cfg["scenario"])
    sim = Simulation(
        scenario, log.control_mode,
        sim_cfg=SimConfig.from_json(cfg["sim"]),
        planner_cfg=PlannerConfig.from_json(cfg["planner"]),
        filter_cfg=ErrorFilterConfig.from_json(cfg["filter"]),
        threshold_cfg=ThresholdSwitcherConfig.from_json(cfg["thresholdSwitcher"]),
        use_threshold_switcher=cfg.get("useThresholdSwitcher", False),
    )
    actions = [_actions_from_record(r) for r in log.records]
    out = RunLog(scenario_id=log.scenario_id, control_mode=log.control_mode,
                 config=cfg)
    timeout = cfg["timeout"]
    while not sim.done and sim.t < timeout:
        action = actions[sim.tick] if sim.tick < len(actions) else OperatorAction()
        out.records.append(sim.step(action))
    out.complete = sim.done

    original = log.to_jsonl()
    reproduced = out.to_jsonl()
    if original != reproduced:
        o_lines, r_lines = original.splitlines(), reproduced.splitlines()
        if len(o_lines) != len(r_lines):
            raise ReplayError(
                f"replay diverged: {len(o_lines)} logged lines vs "
                f"{len(r_lines)} reproduced (truncated or foreign log?)")
        for i, (a, b) in enumerate(zip(o_lines, r_lines)):
            if a != b:
                raise ReplayError(f"replay diverged at line {i}:\n  {a}\n  {b}")
        raise ReplayError("replay diverged")
    return out


def compute_metrics(log: RunLog) -> Metrics:
    """Pure function of the log; collision contacts deduplicated within 1 s."""
    if not log.records:
        raise ValueError("cannot compute metrics of an empty log")
    collisions = 0
    last_contact = -math.inf
    completion_time = log.records[-1].t
    stuck_ticks = 0
    autonomy_ticks = 0
    by_op = by_emics = 0
    dt = (log.records[1].t - log.records[0].t) if len(log.records) > 1 else 0.0

    for rec in log.records:
        if rec.loa is LoaMode.AUTONOMY:
            autonomy_ticks += 1
        for ev in rec.events:
            kind = ev.get("kind")
            if kind == "collision":
                if rec.t - last_contact >= COLLISION_DEBOUNCE:
                    collisions += 1
                last_contact = rec.t
            elif kind == "goalReached":
                completion_time = rec.t
            elif kind == "stuck":
                stuck_ticks += 1
            elif kind == "loaSwitch":
                if ev["initiator"] == Initiator.OPERATOR.value:
                    by_op += 1
                else:
                    by_emics += 1
    return Metrics(
        completion_time=completion_time,
        collisions=collisions,
        score=completion_time + COLLISION_PENALTY * collisions,
        loa_switches_total=by_op + by_emics,
        by_operator=by_op,
        by_emics=by_emics,
        pct_time_autonomy=100.0 * autonomy_ticks / len(log.records),
        stuck_time=stuck_ticks * dt,
        complete=log.complete,
    )


def metrics_csv_row(log: RunLog, metrics: Metrics) -> list:
    seed = log.config.get("seed", log.config.get("scenario", {}).get("seed", 0))
    return [log.scenario_id, log.control_mode.value, seed,
            metrics.completion_time, metrics.collisions, metrics.score,
            metrics.loa_switches_total, metrics.by_operator, metrics.by_emics,
            metrics.pct_time_autonomy]
