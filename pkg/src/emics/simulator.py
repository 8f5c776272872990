"""Deterministic fixed-step 2D world and the closed control loop around it.

The world integrates differential-drive kinematics under speed and
per-tick acceleration caps, blocks motion on contact, casts an exact grid
laser with region-scoped Gaussian corruption, degrades localization in
proportion to scan noise, delays operator commands inside latency regions,
and hosts the autonomy LOA's path-following controller. `Simulation` closes
the loop: expert suggestion, error filter, switch authority, goal
progression, and per-tick records. Identical scenario, seed, and operator
action stream give byte-identical logs.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errorsignal import ErrorFilter, ErrorFilterConfig, raw_error
from .grid import OccupancyGrid, cast_rays
from .model import (
    ACCEL_STEP,
    V_MAX,
    ControlMode,
    Initiator,
    LoaMode,
    LoaSwitchEvent,
    Pose,
    TickRecord,
    Velocity,
    normalize_angle,
)
from .operators import Observation, OperatorAction
from .planner import ExpertPlanner, GlobalPath, PlannerConfig, plan_global
from .scenario import Scenario
from .switchers import (
    AuthorityPolicy,
    EmicsSwitcher,
    ThresholdSwitcherConfig,
    apply_switch_request,
    denial_reason,
    notify,
    threshold_decide,
)


@dataclass
class SimConfig:
    robot_radius: float = 0.18
    angular_max: float = 1.0            # rad/s
    laser_rays: int = 72
    laser_max_range: float = 4.0
    drift_factor: float = 1.0            # localization drift per meter of scan sigma
    live_obstacle_persist: float = 30.0  # backstop age of unobserved sensed cells
    replan_interval: float = 0.6         # seconds between autonomy replans
    lookahead: float = 0.5               # meters, pure pursuit

    def to_json(self) -> dict:
        return {
            "robotRadius": self.robot_radius,
            "angularMax": self.angular_max,
            "laserRays": self.laser_rays,
            "laserMaxRange": self.laser_max_range,
            "driftFactor": self.drift_factor,
            "liveObstaclePersist": self.live_obstacle_persist,
            "replanInterval": self.replan_interval,
            "lookahead": self.lookahead,
        }

    @classmethod
    def from_json(cls, data: dict) -> "SimConfig":
        return cls(
            robot_radius=data.get("robotRadius", 0.18),
            angular_max=data.get("angularMax", 1.0),
            laser_rays=data.get("laserRays", 72),
            laser_max_range=data.get("laserMaxRange", 4.0),
            drift_factor=data.get("driftFactor", 1.0),
            live_obstacle_persist=data.get("liveObstaclePersist", 30.0),
            replan_interval=data.get("replanInterval", 0.6),
            lookahead=data.get("lookahead", 0.5),
        )


@dataclass(eq=False)
class LaserScan:
    angles: np.ndarray
    ranges: np.ndarray
    noise_sigma_applied: float = 0.0


class LatencyQueue:
    """FIFO command pipe; deliveries never reorder even when the delay drops."""

    def __init__(self):
        self._queue = deque()
        self._last_deliver_t = float("-inf")

    def push(self, cmd: Velocity, now: float, delay: float) -> None:
        deliver_t = max(now + delay, self._last_deliver_t)
        self._last_deliver_t = deliver_t
        self._queue.append((deliver_t, cmd))

    def pop_due(self, now: float) -> list:
        out = []
        while self._queue and self._queue[0][0] <= now:
            out.append(self._queue.popleft()[1])
        return out

    def __len__(self):
        return len(self._queue)


def inject_latency(queue: LatencyQueue, cmd: Velocity, now: float,
                   delay: float) -> None:
    """Queue a command for delivery after `delay` seconds (0 = same tick)."""
    queue.push(cmd, now, delay)


def integrate_unicycle(pose: Pose, v: float, w: float, dt: float) -> Pose:
    return Pose(
        pose.x + v * math.cos(pose.theta) * dt,
        pose.y + v * math.sin(pose.theta) * dt,
        normalize_angle(pose.theta + w * dt),
    )


def _clamp(value, lo, hi):
    return min(max(value, lo), hi)


class AutonomyController:
    """Path follower for the autonomy LOA: plans on the static map plus the
    sensed obstacle layer, pursues the farthest visible path point, stops and
    replans when the path gets blocked, reverses out when wedged against an
    obstacle, and reports stuck when no path exists at all."""

    BLOCKED_TICKS = 8      # commanded-forward ticks with no motion before recovery
    RECOVERY_TICKS = 10    # reverse for this many ticks, then replan

    def __init__(self, static_map: OccupancyGrid, planner_cfg: PlannerConfig,
                 sim_cfg: SimConfig):
        self.static_map = static_map
        self.planner_cfg = planner_cfg
        self.sim_cfg = sim_cfg
        self.path: Optional[GlobalPath] = None
        self.goal: Optional[Pose] = None
        self.stuck = False
        self._dirty = True
        self._last_plan_t = float("-inf")
        self._inflated: Optional[OccupancyGrid] = None
        self._blocked_ticks = 0
        self._recovery_left = 0
        self._last_cmd_linear = 0.0

    def set_goal(self, goal: Optional[Pose]) -> None:
        self.goal = goal
        self.path = None
        self.stuck = False
        self._dirty = True
        self._recovery_left = 0
        self._blocked_ticks = 0

    def notice_obstacles(self, new_cells) -> None:
        """Mark the plan dirty when sensed cells land near the current path."""
        if self._dirty or self.path is None or not new_cells:
            return
        margin = self.planner_cfg.inflation_radius + self.static_map.resolution
        xy = self.path.xy
        for (ix, iy) in new_cells:
            cx, cy = self.static_map.cell_center(ix, iy)
            d2 = np.min(np.sum((xy - [cx, cy]) ** 2, axis=1))
            if d2 <= margin * margin:
                self._dirty = True
                return

    def _replan(self, est_pose: Pose, nav_map: OccupancyGrid, t: float) -> None:
        self._last_plan_t = t
        self._inflated = nav_map.inflated(self.planner_cfg.inflation_radius)
        self.path = plan_global(nav_map, est_pose, self.goal, self.planner_cfg)
        self.stuck = self.path is None
        self._dirty = False

    def _visible_target(self, est_pose: Pose) -> tuple:
        """Farthest path point within the lookahead that the robot can reach
        on a straight clear segment; falls back to the nearest path point."""
        xy = self.path.xy
        d2 = np.sum((xy - [est_pose.x, est_pose.y]) ** 2, axis=1)
        anchor = int(np.argmin(d2))
        target = anchor
        travelled = 0.0
        idx = anchor
        while idx + 1 < len(xy) and travelled < self.sim_cfg.lookahead:
            travelled += float(np.linalg.norm(xy[idx + 1] - xy[idx]))
            idx += 1
            if self._segment_clear(est_pose, xy[idx]):
                target = idx
        if target == anchor and anchor + 1 < len(xy):
            target = anchor + 1
        return float(xy[target][0]), float(xy[target][1]), anchor

    def _segment_clear(self, pose: Pose, point) -> bool:
        if self._inflated is None:
            return True
        dx, dy = point[0] - pose.x, point[1] - pose.y
        length = math.hypot(dx, dy)
        if length < 1e-9:
            return True
        steps = max(2, int(length / (self.static_map.resolution * 0.5)))
        for i in range(1, steps + 1):
            f = i / steps
            if self._inflated.is_occupied_world(pose.x + f * dx, pose.y + f * dy):
                return False
        return True

    def command(self, est_pose: Pose, executed: Velocity,
                nav_map_fn, t: float) -> Velocity:
        if self.goal is None:
            return Velocity(0.0, 0.0)
        if est_pose.distance_to(self.goal) <= self.planner_cfg.goal_tolerance:
            self._last_cmd_linear = 0.0
            return Velocity(0.0, 0.0)

        # Wedged against something the planner did not know about: back off,
        # then force a replan.
        if self._last_cmd_linear > 0.05 and abs(executed.linear) < 0.02:
            self._blocked_ticks += 1
        else:
            self._blocked_ticks = 0
        if self._recovery_left == 0 and self._blocked_ticks >= self.BLOCKED_TICKS:
            self._recovery_left = self.RECOVERY_TICKS
            self._blocked_ticks = 0
        if self._recovery_left > 0:
            self._recovery_left -= 1
            if self._recovery_left == 0:
                self._dirty = True
                self._last_plan_t = float("-inf")
            self._last_cmd_linear = -0.1
            return Velocity(-0.1, 0.0)

        need_plan = self._dirty or self.path is None
        if self.path is not None and self.path.poses:
            xy = self.path.xy
            d2 = np.sum((xy - [est_pose.x, est_pose.y]) ** 2, axis=1)
            if math.sqrt(float(d2.min())) > self.planner_cfg.corridor_width:
                need_plan = True
        if need_plan and t - self._last_plan_t >= self.sim_cfg.replan_interval:
            self._replan(est_pose, nav_map_fn(), t)
        if self.path is None:
            self._dirty = True  # keep retrying; sensed cells get re-observed
            self._last_cmd_linear = 0.0
            return Velocity(0.0, 0.0)

        tx, ty, anchor = self._visible_target(est_pose)
        bearing = math.atan2(ty - est_pose.y, tx - est_pose.x)
        err = normalize_angle(bearing - est_pose.theta)
        angular = _clamp(2.0 * err, -self.sim_cfg.angular_max, self.sim_cfg.angular_max)
        if abs(err) > 1.0:
            self._last_cmd_linear = 0.0
            return Velocity(0.0, angular)

        cfg = self.planner_cfg
        remaining = float(self.path.remaining[anchor])
        caps = [cfg.v_max, executed.linear + cfg.accel_step]
        if remaining < cfg.decel_distance:
            caps.append(cfg.v_max * math.sqrt(max(remaining, 0.0) / cfg.decel_distance))
        v = max(0.0, min(caps)) * (1.0 - 0.5 * abs(err))
        self._last_cmd_linear = v
        return Velocity(v, angular)


def _lookahead(xy: np.ndarray, pose: Pose, dist: float) -> tuple:
    d2 = np.sum((xy - [pose.x, pose.y]) ** 2, axis=1)
    idx = int(np.argmin(d2))
    travelled = 0.0
    while idx + 1 < len(xy) and travelled < dist:
        travelled += float(np.linalg.norm(xy[idx + 1] - xy[idx]))
        idx += 1
    return float(xy[idx][0]), float(xy[idx][1])


class World:
    """Physical state: pose, speeds, true map, sensing, and command latency."""

    def __init__(self, scenario: Scenario, sim_cfg: SimConfig,
                 planner_cfg: PlannerConfig):
        self.scenario = scenario
        self.cfg = sim_cfg
        self.true_grid = scenario.static_map.with_rects(scenario.true_obstacles)
        self.collision_grid = self.true_grid.inflated(sim_cfg.robot_radius)
        self.true_pose = scenario.start
        self.estimated_pose = scenario.start
        self.executed = Velocity(0.0, 0.0)
        self.rng = np.random.default_rng(scenario.seed)
        self.latency = LatencyQueue()
        self.held_command = Velocity(0.0, 0.0)
        self.live_cells: dict = {}  # (ix, iy) -> expiry time
        self.new_live_cells: list = []
        self.last_scan: Optional[LaserScan] = None
        self.current_sigma = 0.0
        self._static_free = ~scenario.static_map.cells
        self._nav_map_cache = None

    # -- regions -----------------------------------------------------------

    def noise_sigma_at(self, pose: Pose) -> float:
        sigma = 0.0
        for region in self.scenario.noise_regions:
            if region.rect.contains(pose.x, pose.y):
                sigma = max(sigma, region.sigma)
        return sigma

    def latency_delay_at(self, pose: Pose) -> float:
        delay = 0.0
        for region in self.scenario.latency_regions:
            if region.rect.contains(pose.x, pose.y):
                delay = max(delay, region.delay)
        return delay

    # -- motion ------------------------------------------------------------

    def route_teleop(self, cmd: Velocity, now: float) -> Velocity:
        """Pass an operator command through the latency pipe; the effective
        command is the newest delivered one (velocity is held between
        deliveries, as a real base controller would)."""
        self.latency.push(cmd, now, self.latency_delay_at(self.true_pose))
        delivered = self.latency.pop_due(now)
        if delivered:
            self.held_command = delivered[-1]
        return self.held_command

    def apply_motion(self, cmd: Velocity, dt: float) -> list:
        """Clamp the command, integrate, block contact. Returns events."""
        events = []
        prev = self.executed.linear
        v = _clamp(cmd.linear, prev - ACCEL_STEP, prev + ACCEL_STEP)
        v = _clamp(v, -V_MAX, V_MAX)
        w = _clamp(cmd.angular, -self.cfg.angular_max, self.cfg.angular_max)

        candidate = integrate_unicycle(self.true_pose, v, w, dt)
        if self.collision_grid.is_occupied_world(candidate.x, candidate.y):
            if abs(v) > 1e-9:
                events.append({"kind": "collision"})
            # Wheels slip against the contact: position holds (rotation is
            # always safe for a disc footprint) and speed ramps down within
            # the per-tick acceleration budget.
            v = prev - math.copysign(min(abs(prev), ACCEL_STEP), prev) if prev else 0.0
            self.true_pose = integrate_unicycle(self.true_pose, 0.0, w, dt)
        else:
            self.true_pose = candidate
        self.executed = Velocity(v, w)
        return events

    # -- sensing -----------------------------------------------------------

    def sense(self, now: float) -> LaserScan:
        """Cast the laser, corrupt it inside noise regions, update the live
        obstacle layer and the localization estimate."""
        sigma = self.noise_sigma_at(self.true_pose)
        self.current_sigma = sigma
        n = self.cfg.laser_rays
        angles = self.true_pose.theta + np.arange(n) * (2.0 * math.pi / n)
        ranges = cast_rays(self.true_grid, self.true_pose.x, self.true_pose.y,
                           angles, self.cfg.laser_max_range)
        if sigma > 0.0:
            ranges = np.clip(ranges + self.rng.normal(0.0, sigma, n),
                             0.0, self.cfg.laser_max_range)
        scan = LaserScan(angles=angles, ranges=ranges, noise_sigma_applied=sigma)
        self.last_scan = scan

        if sigma > 0.0:
            drift = self.cfg.drift_factor * sigma
            dx, dy = self.rng.normal(0.0, drift, 2)
            dth = self.rng.normal(0.0, 0.5 * drift)
            self.estimated_pose = Pose(self.true_pose.x + dx,
                                       self.true_pose.y + dy,
                                       self.true_pose.theta + dth)
        else:
            self.estimated_pose = self.true_pose

        self._update_live_cells(scan, now)
        return scan

    def _update_live_cells(self, scan: LaserScan, now: float) -> None:
        """Maintain the sensed obstacle layer the way a costmap would: scan
        endpoints in free static cells are marked occupied; a marked cell is
        cleared when a later ray is seen to pass beyond it, or when it has not
        been re-observed for the backstop persistence."""
        grid = self.scenario.static_map
        est = self.estimated_pose
        rel = scan.angles - self.true_pose.theta  # body-frame ray offsets

        fresh = []
        hit = scan.ranges < self.cfg.laser_max_range - 1e-6
        if hit.any():
            # Endpoints are mapped through the (possibly drifted) estimate,
            # which is exactly how localization error corrupts the layer.
            ex = est.x + scan.ranges[hit] * np.cos(est.theta + rel[hit])
            ey = est.y + scan.ranges[hit] * np.sin(est.theta + rel[hit])
            ix = np.floor((ex - grid.origin.x) / grid.resolution).astype(int)
            iy = np.floor((ey - grid.origin.y) / grid.resolution).astype(int)
            ok = (ix >= 0) & (ix < grid.width) & (iy >= 0) & (iy < grid.height)
            expiry = now + self.cfg.live_obstacle_persist
            for cx, cy in zip(ix[ok], iy[ok]):
                if self._static_free[cy, cx]:
                    key = (int(cx), int(cy))
                    if key not in self.live_cells:
                        fresh.append(key)
                    self.live_cells[key] = expiry

        removed = False
        if self.live_cells:
            n = len(scan.angles)
            spacing = 2.0 * math.pi / n
            clear_margin = 2.5 * grid.resolution
            for key in list(self.live_cells):
                if self.live_cells[key] <= now:
                    del self.live_cells[key]
                    removed = True
                    continue
                cx, cy = grid.cell_center(*key)
                r_c = math.hypot(cx - est.x, cy - est.y)
                if r_c >= self.cfg.laser_max_range - clear_margin:
                    continue
                bearing = math.atan2(cy - est.y, cx - est.x) - est.theta
                frac = (bearing % (2.0 * math.pi)) / spacing
                ray = int(round(frac)) % n
                # Only a ray that truly sweeps through the cell may clear it;
                # at long range the nearest ray usually passes beside it.
                off_track = abs(frac - round(frac)) * spacing * r_c
                if off_track <= 1.5 * grid.resolution and \
                        scan.ranges[ray] > r_c + clear_margin:
                    del self.live_cells[key]
                    removed = True

        self.new_live_cells = fresh
        if fresh or removed:
            self._nav_map_cache = None

    def nav_map(self) -> OccupancyGrid:
        """Static map plus currently live sensed cells (autonomy's view)."""
        if self._nav_map_cache is None:
            grid = self.scenario.static_map
            cells = grid.cells.copy()
            for (ix, iy) in self.live_cells:
                cells[iy, ix] = True
            self._nav_map_cache = OccupancyGrid(grid.width, grid.height,
                                                grid.resolution, grid.origin, cells)
        return self._nav_map_cache


def simulate_laser(world: World, now: float = 0.0) -> LaserScan:
    """Standalone scan of the current world state (see World.sense)."""
    return world.sense(now)


class _DistractionTracker:
    def __init__(self, windows):
        self.windows = list(windows)
        self.onset = [None] * len(self.windows)
        self.done = [False] * len(self.windows)

    def update(self, pose: Pose, t: float) -> tuple:
        """Returns (active, onset_t, events)."""
        events = []
        for i, win in enumerate(self.windows):
            if self.done[i]:
                continue
            if self.onset[i] is None:
                triggered = (win.at_time is not None and t >= win.at_time) or \
                            (win.rect is not None and win.rect.contains(pose.x, pose.y))
                if triggered:
                    self.onset[i] = t
                    events.append({"kind": "distractionStart"})
            elif t >= self.onset[i] + win.duration:
                self.done[i] = True
                events.append({"kind": "distractionEnd"})
        active = [(self.onset[i], i) for i in range(len(self.windows))
                  if self.onset[i] is not None and not self.done[i]]
        if active:
            return True, active[0][0], events
        return False, None, events


class Simulation:
    """One run's full control loop, advanced tick by tick via step()."""

    def __init__(self, scenario: Scenario, control_mode: ControlMode,
                 sim_cfg: SimConfig = None, planner_cfg: PlannerConfig = None,
                 filter_cfg: ErrorFilterConfig = None,
                 threshold_cfg: ThresholdSwitcherConfig = None,
                 use_threshold_switcher: bool = False):
        self.scenario = scenario
        self.control_mode = control_mode
        self.policy = AuthorityPolicy.for_mode(control_mode)
        self.sim_cfg = sim_cfg or SimConfig()
        self.planner_cfg = planner_cfg or PlannerConfig()
        self.filter = ErrorFilter(filter_cfg or ErrorFilterConfig())
        self.threshold_cfg = threshold_cfg or ThresholdSwitcherConfig()
        self.use_threshold_switcher = use_threshold_switcher
        self.emics = EmicsSwitcher()

        self.world = World(scenario, self.sim_cfg, self.planner_cfg)
        self.expert = ExpertPlanner(scenario.static_map, self.planner_cfg)
        self.autonomy = AutonomyController(scenario.static_map, self.planner_cfg,
                                           self.sim_cfg)
        self.loa = (LoaMode.AUTONOMY
                    if control_mode in (ControlMode.PURE_AUTONOMY,)
                    else LoaMode.TELEOPERATION)
        self.distraction = _DistractionTracker(scenario.distraction_windows)

        self.tick = 0
        self.goal_index = 0
        self.manual_goal: Optional[Pose] = None
        self.done = False
        self.last_switch: Optional[LoaSwitchEvent] = None
        self.notifications: list = []
        self.s_expert = 0.0
        self._distraction_active = False
        self._distraction_onset = None
        self._set_active_goal()

    # -- goals ---------------------------------------------------------------

    def active_goal(self) -> Optional[Pose]:
        if self.manual_goal is not None:
            return self.manual_goal
        if self.goal_index < len(self.scenario.goals):
            return self.scenario.goals[self.goal_index]
        return None

    def _set_active_goal(self) -> None:
        goal = self.active_goal()
        self.expert.set_goal(self.world.estimated_pose, goal)
        self.autonomy.set_goal(goal)

    def set_goal(self, goal: Pose) -> None:
        """Operator-selected destination (map click)."""
        self.manual_goal = goal
        self._set_active_goal()

    @property
    def t(self) -> float:
        return self.tick * self.scenario.dt

    # -- switching -------------------------------------------------------------

    def _execute_switch(self, initiator: Initiator, reason: str, events: list) -> bool:
        new_loa = apply_switch_request(self.loa, initiator, self.policy)
        if new_loa is None:
            events.append({"kind": "switchDenied", "initiator": initiator.value,
                           "reason": denial_reason(initiator, self.policy)})
            return False
        event = LoaSwitchEvent(t=self.t, from_loa=self.loa, to_loa=new_loa,
                               initiator=initiator, reason=reason)
        self.loa = new_loa
        self.filter.reset_on_switch(self.t)
        self.last_switch = event
        self.notifications.append(notify(event))
        events.append({"kind": "loaSwitch", "from": event.from_loa.value,
                       "to": event.to_loa.value, "initiator": initiator.value,
                       "reason": reason})
        return True

    # -- main loop ---------------------------------------------------------------

    def observation(self) -> Observation:
        goal = self.active_goal()
        return Observation(
            estimated_pose=self.world.estimated_pose,
            executed=self.world.executed,
            loa=self.loa,
            goal=goal,
            expert_path=self.expert.path.poses if self.expert.path else [],
            noise_sigma=self.world.current_sigma,
            stuck=self.autonomy.stuck,
            distraction_active=self._distraction_active,
            distraction_onset=self._distraction_onset,
            last_switch=self.last_switch,
            goal_tolerance=self.planner_cfg.goal_tolerance,
        )

    def step(self, action: Optional[OperatorAction] = None) -> TickRecord:
        dt = self.scenario.dt
        now = self.t
        events: list = []
        action = action or OperatorAction()

        active, onset, distraction_events = self.distraction.update(
            self.world.true_pose, now)
        self._distraction_active, self._distraction_onset = active, onset
        events.extend(distraction_events)

        # Record raw operator inputs so a log can be replayed verbatim.
        if action.set_goal is not None:
            events.append({"kind": "setGoal", "x": action.set_goal.x,
                           "y": action.set_goal.y})
            self.set_goal(action.set_goal)
        if action.teleop is not None:
            events.append({"kind": "operatorTeleop",
                           "linear": action.teleop.linear,
                           "angular": action.teleop.angular})
        if action.request_switch:
            events.append({"kind": "operatorSwitchRequest"})
            self._execute_switch(Initiator.OPERATOR, "operator request", events)

        # Command selection by LOA, then physics.
        if self.loa is LoaMode.TELEOPERATION:
            issued = action.teleop if action.teleop is not None else Velocity(0.0, 0.0)
            commanded = self.world.route_teleop(issued, now)
        else:
            commanded = self.autonomy.command(self.world.estimated_pose,
                                              self.world.executed,
                                              self.world.nav_map, now)
            if self.autonomy.stuck:
                events.append({"kind": "stuck"})
        events.extend(self.world.apply_motion(commanded, dt))

        # Sensing, then the expert's blind suggestion and the error signal.
        self.world.sense(now)
        self.autonomy.notice_obstacles(self.world.new_live_cells)

        suggestion = self.expert.suggest(self.world.estimated_pose,
                                         self.world.executed.linear, now)
        self.s_expert = suggestion.s_expert
        e_raw = raw_error(suggestion.s_expert, self.world.executed.linear)
        e_filtered = self.filter.update(e_raw, now)

        if self.policy.emics_may_switch:
            if self.use_threshold_switcher:
                if not self.filter.in_lockout(now) and \
                        threshold_decide(e_filtered, self.threshold_cfg):
                    self._execute_switch(
                        Initiator.EMICS,
                        "smoothed error exceeded threshold", events)
            else:
                decision = self.emics.decide(e_filtered, self.world.executed.linear,
                                             now, self.filter)
                if decision.should_switch:
                    self._execute_switch(Initiator.EMICS, decision.reason, events)

        # Goal progression on ground truth.
        goal = self.active_goal()
        if goal is not None and self.world.true_pose.distance_to(goal) \
                <= self.planner_cfg.goal_tolerance:
            if self.manual_goal is not None:
                events.append({"kind": "goalReached", "index": -1})
                self.manual_goal = None
            else:
                events.append({"kind": "goalReached", "index": self.goal_index})
                self.goal_index += 1
            self._set_active_goal()
            if self.active_goal() is None:
                self.done = True

        record = TickRecord(
            t=now,
            true_pose=self.world.true_pose,
            estimated_pose=self.world.estimated_pose,
            commanded=commanded,
            executed=self.world.executed,
            loa=self.loa,
            s_expert=self.s_expert,
            e_raw=e_raw,
            e_filtered=e_filtered,
            events=events,
        )
        self.tick += 1
        return record
