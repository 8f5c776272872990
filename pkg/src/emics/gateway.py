"""Live bridge between a running simulation and the operator control UI.

JSON text frames over a websocket: the map once (run-length encoded), one
state frame per tick, switch notifications, denial replies, and a metrics
message at run end. Inbound operator commands are queued and applied at tick
boundaries, so a live run with a given command stream reproduces exactly what
the headless runner would do with the same stream; the transport adds no
behavior of its own.
"""

from __future__ import annotations

import asyncio
import hashlib
import json
from collections import deque
from typing import Optional

import numpy as np

from .errorsignal import ErrorFilterConfig
from .model import ControlMode, Pose, RunLog, Velocity, canonical_dumps
from .operators import OperatorAction, OperatorProfile
from .planner import PlannerConfig
from .runner import build_config, compute_metrics, default_timeout
from .scenario import Scenario
from .simulator import SimConfig, Simulation
from .switchers import ThresholdSwitcherConfig

MAX_PATH_POINTS = 50
MAX_SCAN_POINTS = 36
FRAME_BUFFER = 10  # outbound frames kept under backpressure; oldest dropped


def map_digest(scenario: Scenario) -> str:
    rows = scenario.static_map.to_rows()
    return hashlib.sha1("\n".join(rows).encode()).hexdigest()[:16]


def encode_map(scenario: Scenario) -> dict:
    """Run-length encoding of the static map, row-major from row 0, starting
    with a free run (possibly of length 0)."""
    grid = scenario.static_map
    flat = grid.cells.reshape(-1)
    runs = []
    current = False
    count = 0
    for v in flat:
        if bool(v) == current:
            count += 1
        else:
            runs.append(count)
            current = not current
            count = 1
    runs.append(count)
    return {
        "type": "map",
        "width": grid.width,
        "height": grid.height,
        "resolution": grid.resolution,
        "origin": grid.origin.to_json(),
        "runs": runs,
        "digest": map_digest(scenario),
    }


def _downsample(points, limit):
    if len(points) <= limit:
        return list(points)
    step = max(1, len(points) // limit)
    out = list(points[::step])
    if out and points[-1] != out[-1]:
        out.append(points[-1])
    return out[:limit + 1]


def build_frame(sim: Simulation, digest: str, record) -> dict:
    goal = sim.active_goal()
    path = sim.expert.path.poses if sim.expert.path else []
    path_pts = _downsample([[round(p.x, 3), round(p.y, 3)] for p in path],
                           MAX_PATH_POINTS)
    scan_pts = []
    scan = sim.world.last_scan
    if scan is not None:
        est = sim.world.estimated_pose
        rel = scan.angles - sim.world.true_pose.theta
        hit = scan.ranges < sim.sim_cfg.laser_max_range - 1e-6
        ex = est.x + scan.ranges[hit] * np.cos(est.theta + rel[hit])
        ey = est.y + scan.ranges[hit] * np.sin(est.theta + rel[hit])
        scan_pts = _downsample([[round(float(x), 3), round(float(y), 3)]
                                for x, y in zip(ex, ey)], MAX_SCAN_POINTS)
    return {
        "type": "frame",
        "t": record.t,
        "robotPose": record.estimated_pose.to_json(),
        "loa": record.loa.value,
        "controlMode": sim.control_mode.value,
        "eFiltered": record.e_filtered,
        "goal": [goal.x, goal.y] if goal is not None else None,
        "plannedPath": path_pts,
        "scanPoints": scan_pts,
        "mapDigest": digest,
    }


def parse_command(raw: str) -> OperatorAction:
    """Decode one client message into an operator action.

    Raises ValueError on anything malformed; the caller answers with a
    denied reply and keeps the connection.
    """
    try:
        msg = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ValueError(f"not valid JSON: {exc}") from None
    if not isinstance(msg, dict):
        raise ValueError("message must be a JSON object")
    kind = msg.get("type")
    if kind == "teleop":
        try:
            return OperatorAction(teleop=Velocity(float(msg["linear"]),
                                                  float(msg["angular"])))
        except (KeyError, TypeError, ValueError):
            raise ValueError("teleop needs numeric linear and angular") from None
    if kind == "setGoal":
        try:
            return OperatorAction(set_goal=Pose(float(msg["x"]), float(msg["y"])))
        except (KeyError, TypeError, ValueError):
            raise ValueError("setGoal needs numeric x and y") from None
    if kind == "switchLoa":
        return OperatorAction(request_switch=True)
    raise ValueError(f"unknown message type {kind!r}")


class Gateway:
    """One simulation, at most one operator connection."""

    def __init__(self, scenario: Scenario, control_mode: ControlMode,
                 timeout: Optional[float] = None):
        self.scenario = scenario
        self.control_mode = control_mode
        self.sim_cfg = SimConfig()
        self.planner_cfg = PlannerConfig()
        self.filter_cfg = ErrorFilterConfig()
        self.threshold_cfg = ThresholdSwitcherConfig()
        self.sim = Simulation(scenario, control_mode, sim_cfg=self.sim_cfg,
                              planner_cfg=self.planner_cfg,
                              filter_cfg=self.filter_cfg,
                              threshold_cfg=self.threshold_cfg)
        self.timeout = timeout if timeout is not None else \
            default_timeout(scenario, self.planner_cfg)
        self.log = RunLog(
            scenario_id=scenario.scenario_id,
            control_mode=control_mode,
            config=build_config(scenario, OperatorProfile(), self.sim_cfg,
                                self.planner_cfg, self.filter_cfg,
                                self.threshold_cfg, self.timeout, False),
        )
        self.digest = map_digest(scenario)
        self.client = None
        self.inbound: deque = deque()
        self.frames: deque = deque(maxlen=FRAME_BUFFER)
        self.reliable: deque = deque()  # switch/denied/metrics, never dropped
        self._send_event = asyncio.Event()
        self.finished = asyncio.Event()

    # -- connection handling -------------------------------------------------

    async def handler(self, websocket):
        if self.client is not None:
            await websocket.send(canonical_dumps(
                {"type": "denied", "reason": "another operator is connected"}))
            await websocket.close()
            return
        self.client = websocket
        try:
            await websocket.send(canonical_dumps(encode_map(self.scenario)))
            async for raw in websocket:
                try:
                    self.inbound.append(parse_command(raw))
                except ValueError as exc:
                    await websocket.send(canonical_dumps(
                        {"type": "denied", "reason": f"malformed message: {exc}"}))
        finally:
            self.client = None

    async def _sender(self):
        while True:
            try:
                await asyncio.wait_for(self._send_event.wait(), timeout=0.2)
            except asyncio.TimeoutError:
                pass
            self._send_event.clear()
            client = self.client
            while client is not None and (self.reliable or self.frames):
                queue = self.reliable if self.reliable else self.frames
                msg = queue.popleft()
                try:
                    await client.send(msg)
                except Exception:
                    self.client = None
                    break
                client = self.client
            if self.finished.is_set() and not self.frames and \
                    (not self.reliable or self.client is None):
                break

    # -- simulation loop -------------------------------------------------------

    def _drain_inbound(self) -> OperatorAction:
        action = OperatorAction()
        while self.inbound:
            msg = self.inbound.popleft()
            if msg.teleop is not None:
                action.teleop = msg.teleop
            if msg.set_goal is not None:
                action.set_goal = msg.set_goal
            if msg.request_switch:
                action.request_switch = True
        return action

    async def run(self):
        dt = self.scenario.dt
        loop = asyncio.get_running_loop()
        next_deadline = loop.time()
        sim = self.sim
        while not sim.done and sim.t < self.timeout:
            action = self._drain_inbound()
            record = sim.step(action)
            self.log.records.append(record)

            for note in sim.notifications:
                self.reliable.append(canonical_dumps(note))
            sim.notifications.clear()
            for ev in record.events:
                if ev.get("kind") == "switchDenied":
                    self.reliable.append(canonical_dumps(
                        {"type": "denied", "reason": ev["reason"]}))
            self.frames.append(canonical_dumps(
                build_frame(sim, self.digest, record)))
            self._send_event.set()

            next_deadline += dt
            delay = next_deadline - loop.time()
            if delay > 0:
                await asyncio.sleep(delay)
        self.log.complete = sim.done
        metrics = compute_metrics(self.log) if self.log.records else None
        if metrics is not None:
            self.reliable.append(canonical_dumps(
                {"type": "metrics", **metrics.to_json()}))
        self.finished.set()
        self._send_event.set()

    async def serve(self, port: int, host: str = "127.0.0.1"):
        import websockets

        async with websockets.serve(self.handler, host, port):
            sender = asyncio.create_task(self._sender())
            await self.run()
            try:
                await asyncio.wait_for(sender, timeout=5.0)
            except asyncio.TimeoutError:
                sender.cancel()
        return self.log


def serve_forever(scenario: Scenario, control_mode: ControlMode, port: int,
                  host: str = "0.0.0.0") -> None:
    gateway = Gateway(scenario, control_mode)
    asyncio.run(gateway.serve(port, host=host))
