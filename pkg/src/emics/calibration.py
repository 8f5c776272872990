"""Parameter fitting for the threshold switcher: replay logged motion through
candidate (alpha, threshold) pairs, match proposed switch times against the
operator's recorded ones, and grid-search the pair minimizing the summed cost.

The per-trial cost is the total timing error of matched proposals plus a flat
penalty for every proposal that matches nothing; unmatched operator switches
are surfaced in the report. The grid search additionally penalizes those
missed operator switches when ranking cells, since a sweep scored on
prediction error alone is won by parameterizations that barely predict.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errorsignal import raw_error
from .model import Initiator, RunLog


@dataclass
class CalibrationConfig:
    alpha_grid: tuple
    threshold_grid: tuple
    match_window: float = 5.0   # seconds; proposals farther than this never match
    penalty: float = 30.0       # seconds added per unmatched proposal
    lockout_seconds: float = 2.0

    def __post_init__(self):
        if not self.alpha_grid or not self.threshold_grid:
            raise ValueError("calibration grids must be nonempty")
        if self.match_window <= 0:
            raise ValueError("match window must be positive")
        self.alpha_grid = tuple(sorted(self.alpha_grid))
        self.threshold_grid = tuple(sorted(self.threshold_grid))

    def to_json(self) -> dict:
        return {
            "alphaGrid": list(self.alpha_grid),
            "thresholdGrid": list(self.threshold_grid),
            "matchWindow": self.match_window,
            "penalty": self.penalty,
            "lockoutSeconds": self.lockout_seconds,
        }

    @classmethod
    def from_json(cls, data: dict) -> "CalibrationConfig":
        return cls(
            alpha_grid=tuple(data["alphaGrid"]),
            threshold_grid=tuple(data["thresholdGrid"]),
            match_window=data.get("matchWindow", 5.0),
            penalty=data.get("penalty", 30.0),
            lockout_seconds=data.get("lockoutSeconds", 2.0),
        )


@dataclass
class CostReport:
    j: float
    matches: list            # (proposed t, actual t) pairs
    unmatched_count: int     # proposals that matched nothing
    missed_actual: int = 0   # operator switches no proposal matched (fyi only)
    match_window: float = 5.0
    penalty: float = 30.0


def propose_switches(log: RunLog, alpha: float, threshold: float,
                     lockout: float = 2.0) -> list:
    """Timestamps where the threshold rule would fire on the logged motion.

    The error EMA is recomputed from the logged expert/robot speeds with the
    candidate alpha; each firing resets the average and suppresses further
    proposals for the lockout period, mirroring live switcher semantics.
    """
    proposals = []
    e_filtered = 0.0
    suppressed_until = float("-inf")
    for rec in log.records:
        if rec.s_expert is None or rec.executed is None:
            raise ValueError("log record lacks speed fields; cannot replay")
        e = raw_error(rec.s_expert, rec.executed.linear)
        if rec.t < suppressed_until:
            e_filtered = 0.0
            continue
        e_filtered = alpha * e + (1.0 - alpha) * e_filtered
        if e_filtered > threshold:
            proposals.append(rec.t)
            e_filtered = 0.0
            suppressed_until = rec.t + lockout
    return proposals


def cost(proposed, actual, cfg: CalibrationConfig) -> CostReport:
    """Greedy nearest-neighbor matching of proposals to operator switches
    within the window; each actual switch is consumable once."""
    available = list(actual)
    matches = []
    unmatched = 0
    total = 0.0
    for t_hat in proposed:
        best: Optional[int] = None
        best_gap = cfg.match_window
        for i, t in enumerate(available):
            gap = abs(t_hat - t)
            if gap <= best_gap:
                best, best_gap = i, gap
        if best is None:
            unmatched += 1
            total += cfg.penalty
        else:
            matches.append((t_hat, available.pop(best)))
            total += best_gap
    return CostReport(j=total, matches=matches, unmatched_count=unmatched,
                      missed_actual=len(available),
                      match_window=cfg.match_window, penalty=cfg.penalty)


def operator_switch_times(log: RunLog) -> list:
    return [s.t for s in log.switches if s.initiator is Initiator.OPERATOR]


def grid_search(logs, cfg: CalibrationConfig):
    """Exhaustive (alpha, threshold) sweep minimizing the summed matching cost
    over all logs. Ties break toward smaller alpha, then smaller threshold.
    Returns (alpha*, threshold*, total_cost, rows) with rows covering every
    grid cell.

    The selection objective is the per-trial cost plus the same flat penalty
    for every operator switch the candidate failed to predict. Without the
    symmetric term the sweep is degenerate: a candidate that stays silent
    (or nearly so) scores near zero on prediction error alone and would beat
    any parameterization that actually mimics the operators.
    """
    if not logs:
        raise ValueError("grid search needs at least one log")
    actuals = [operator_switch_times(log) for log in logs]
    rows = []
    best = None
    for alpha in cfg.alpha_grid:
        for threshold in cfg.threshold_grid:
            total = 0.0
            for log, actual in zip(logs, actuals):
                proposed = propose_switches(log, alpha, threshold,
                                            cfg.lockout_seconds)
                report = cost(proposed, actual, cfg)
                total += report.j + cfg.penalty * report.missed_actual
            rows.append((alpha, threshold, total))
            if best is None or total < best[2]:
                best = (alpha, threshold, total)
    return best[0], best[1], best[2], rows
