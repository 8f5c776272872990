"""Expert planner: global shortest path on the static map and the idealized
speed the robot should currently hold toward the goal.

The expert deliberately plans on prior knowledge only; obstacles discovered
at runtime never change its plan, which makes its suggestion an optimistic
upper bound on achievable progress.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .grid import OccupancyGrid, OutOfMapError
from .model import ACCEL_STEP, V_MAX, Pose


@dataclass
class PlannerConfig:
    inflation_radius: float = 0.23       # meters; robot radius + 0.05 margin
    v_max: float = V_MAX
    accel_step: float = ACCEL_STEP       # per-tick speed delta cap
    goal_tolerance: float = 0.15         # meters
    decel_distance: float = 0.5          # meters; start of the approach ramp
    curvature_slowdown: float = 0.8      # dimensionless gain on path curvature
    corridor_width: float = 1.0          # meters; re-anchor/replan distance

    def to_json(self) -> dict:
        return {
            "inflationRadius": self.inflation_radius,
            "vMax": self.v_max,
            "accelStep": self.accel_step,
            "goalTolerance": self.goal_tolerance,
            "decelDistance": self.decel_distance,
            "curvatureSlowdown": self.curvature_slowdown,
            "corridorWidth": self.corridor_width,
        }

    @classmethod
    def from_json(cls, data: dict) -> "PlannerConfig":
        return cls(
            inflation_radius=data.get("inflationRadius", 0.23),
            v_max=data.get("vMax", V_MAX),
            accel_step=data.get("accelStep", ACCEL_STEP),
            goal_tolerance=data.get("goalTolerance", 0.15),
            decel_distance=data.get("decelDistance", 0.5),
            curvature_slowdown=data.get("curvatureSlowdown", 0.8),
            corridor_width=data.get("corridorWidth", 1.0),
        )


@dataclass(eq=False)
class GlobalPath:
    """Cell path plus the world polyline and per-point remaining length."""

    cells: list
    poses: list
    cost: float
    remaining: np.ndarray = field(repr=False)  # meters to goal from each point

    @property
    def xy(self) -> np.ndarray:
        return np.array([[p.x, p.y] for p in self.poses])


@dataclass
class ExpertSuggestion:
    path: list                 # list of Pose (empty when no path exists)
    s_expert: float            # m/s
    distance_to_goal: float    # meters (inf when no path)


# Fixed neighbor ordering gives deterministic tie-breaking.
_NEIGHBORS_8 = (
    (1, 0, 1.0), (-1, 0, 1.0), (0, 1, 1.0), (0, -1, 1.0),
    (1, 1, math.sqrt(2)), (1, -1, math.sqrt(2)),
    (-1, 1, math.sqrt(2)), (-1, -1, math.sqrt(2)),
)
_NEIGHBORS_4 = ((1, 0, 1.0), (-1, 0, 1.0), (0, 1, 1.0), (0, -1, 1.0))


def _nearest_free_cell(grid: OccupancyGrid, ix: int, iy: int, max_radius_cells: int):
    """Closest free cell to (ix, iy), searched over growing rings."""
    if grid.in_bounds(ix, iy) and not grid.cells[iy, ix]:
        return ix, iy
    for r in range(1, max_radius_cells + 1):
        best = None
        for dx in range(-r, r + 1):
            for dy in range(-r, r + 1):
                if max(abs(dx), abs(dy)) != r:
                    continue
                nx, ny = ix + dx, iy + dy
                if grid.in_bounds(nx, ny) and not grid.cells[ny, nx]:
                    d = dx * dx + dy * dy
                    if best is None or d < best[0]:
                        best = (d, nx, ny)
        if best is not None:
            return best[1], best[2]
    return None


def plan_global(static_map: OccupancyGrid, start: Pose, goal: Pose,
                cfg: PlannerConfig, connectivity: int = 8) -> Optional[GlobalPath]:
    """Dijkstra shortest path on the inflated static map.

    Returns None when the goal is unreachable or lies in an occupied
    inflated cell. 8-connected with sqrt(2) diagonal cost by default;
    diagonal moves may not cut occupied corners.
    """
    grid = static_map.inflated(cfg.inflation_radius)
    try:
        gx, gy = grid.world_to_cell(goal)
        sx, sy = grid.world_to_cell(start)
    except OutOfMapError:
        return None
    if grid.cells[gy, gx]:
        return None
    start_cell = _nearest_free_cell(grid, sx, sy,
                                    int(math.ceil(cfg.inflation_radius / grid.resolution)) + 1)
    if start_cell is None:
        return None
    sx, sy = start_cell

    neighbors = _NEIGHBORS_8 if connectivity == 8 else _NEIGHBORS_4
    dist = {(sx, sy): 0.0}
    prev = {}
    heap = [(0.0, 0, (sx, sy))]
    seq = 0
    cells = grid.cells
    goal_cell = (gx, gy)
    while heap:
        d, _, cell = heapq.heappop(heap)
        if d > dist.get(cell, math.inf):
            continue
        if cell == goal_cell:
            break
        cx, cy = cell
        for dx, dy, w in neighbors:
            nx, ny = cx + dx, cy + dy
            if not (0 <= nx < grid.width and 0 <= ny < grid.height):
                continue
            if cells[ny, nx]:
                continue
            # No cutting corners: a diagonal move needs both cardinals free.
            if dx and dy and (cells[cy, nx] or cells[ny, cx]):
                continue
            nd = d + w
            if nd < dist.get((nx, ny), math.inf):
                dist[(nx, ny)] = nd
                prev[(nx, ny)] = cell
                seq += 1
                heapq.heappush(heap, (nd, seq, (nx, ny)))

    if goal_cell not in dist:
        return None
    chain = [goal_cell]
    while chain[-1] != (sx, sy):
        chain.append(prev[chain[-1]])
    chain.reverse()
    poses = [Pose(*grid.cell_center(ix, iy)) for ix, iy in chain]

    xy = np.array([[p.x, p.y] for p in poses])
    seg = np.linalg.norm(np.diff(xy, axis=0), axis=1) if len(poses) > 1 else np.zeros(0)
    remaining = np.concatenate([np.cumsum(seg[::-1])[::-1], [0.0]])
    return GlobalPath(cells=chain, poses=poses, cost=dist[goal_cell], remaining=remaining)


def _curvature_cap(path: GlobalPath, anchor: int, cfg: PlannerConfig,
                   window: float = 0.8, sample_step: float = 0.2) -> float:
    """Speed cap from the upcoming heading change per meter of path."""
    xy = path.xy
    if len(xy) < 3:
        return cfg.v_max
    step = max(1, int(round(sample_step / max(np.linalg.norm(xy[1] - xy[0]), 1e-9))))
    idx = list(range(anchor, len(xy), step))
    if idx[-1] != len(xy) - 1:
        idx.append(len(xy) - 1)
    pts = xy[idx]
    total_turn = 0.0
    length = 0.0
    prev_heading = None
    for i in range(1, len(pts)):
        d = pts[i] - pts[i - 1]
        seg_len = float(np.linalg.norm(d))
        if seg_len < 1e-9:
            continue
        heading = math.atan2(d[1], d[0])
        if prev_heading is not None:
            turn = abs(math.remainder(heading - prev_heading, 2.0 * math.pi))
            total_turn += turn
        prev_heading = heading
        length += seg_len
        if length >= window:
            break
    if length < 1e-6:
        return cfg.v_max
    kappa = total_turn / length  # rad per meter of upcoming path
    return cfg.v_max / (1.0 + cfg.curvature_slowdown * kappa)


def suggest_speed(path: GlobalPath, robot_pose: Pose, s_robot: float,
                  cfg: PlannerConfig) -> ExpertSuggestion:
    """Idealized speed along the path: accelerate within the per-tick cap,
    slow for upcoming curvature, ramp down near the goal, stop inside the
    goal tolerance. The robot is anchored to its nearest path point."""
    if path is None or not path.poses:
        return ExpertSuggestion(path=[], s_expert=0.0, distance_to_goal=math.inf)
    xy = path.xy
    d2 = np.sum((xy - [robot_pose.x, robot_pose.y]) ** 2, axis=1)
    anchor = int(np.argmin(d2))
    distance = float(path.remaining[anchor])
    if distance <= cfg.goal_tolerance:
        return ExpertSuggestion(path=path.poses, s_expert=0.0, distance_to_goal=distance)

    caps = [
        cfg.v_max,
        s_robot + cfg.accel_step,
        _curvature_cap(path, anchor, cfg),
    ]
    if distance < cfg.decel_distance:
        caps.append(cfg.v_max * math.sqrt(distance / cfg.decel_distance))
    s_expert = max(0.0, min(caps))
    return ExpertSuggestion(path=path.poses, s_expert=s_expert, distance_to_goal=distance)


class ExpertPlanner:
    """Caches the global plan; replans only on goal change or corridor exit
    (the latter rate-limited, since a deviating robot stays off-corridor)."""

    REPLAN_INTERVAL = 1.0  # seconds between corridor-exit replans

    def __init__(self, static_map: OccupancyGrid, cfg: PlannerConfig = None):
        self.static_map = static_map
        self.cfg = cfg or PlannerConfig()
        self.goal: Optional[Pose] = None
        self.path: Optional[GlobalPath] = None
        self._last_replan = float("-inf")

    def set_goal(self, robot_pose: Pose, goal: Optional[Pose]) -> None:
        self.goal = goal
        self.path = (plan_global(self.static_map, robot_pose, goal, self.cfg)
                     if goal is not None else None)

    def suggest(self, robot_pose: Pose, s_robot: float,
                now: float = 0.0) -> ExpertSuggestion:
        if self.goal is None:
            return ExpertSuggestion(path=[], s_expert=0.0, distance_to_goal=math.inf)
        if self.path is not None and self.path.poses:
            xy = self.path.xy
            d2 = np.sum((xy - [robot_pose.x, robot_pose.y]) ** 2, axis=1)
            if (math.sqrt(float(d2.min())) > self.cfg.corridor_width
                    and now - self._last_replan >= self.REPLAN_INTERVAL):
                self._last_replan = now
                self.path = plan_global(self.static_map, robot_pose, self.goal, self.cfg)
        return suggest_speed(self.path, robot_pose, s_robot, self.cfg)
