"""Scenario definition and JSON round-trip.

A scenario bundles the prior-knowledge map with the ground truth the robot
actually encounters: obstacles missing from the map, sensor-noise and
command-latency regions, operator distraction windows, and the seed that
pins every stochastic draw of a run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .grid import OccupancyGrid
from .model import (
    DEFAULT_TICK_RATE,
    DistractionWindow,
    LatencyRegion,
    NoiseRegion,
    Pose,
    Rect,
    canonical_dumps,
)
from .operators import OperatorProfile


@dataclass
class Scenario:
    scenario_id: str
    static_map: OccupancyGrid
    start: Pose
    goals: tuple
    seed: int = 0
    tick_rate: float = DEFAULT_TICK_RATE
    true_obstacles: tuple = ()
    noise_regions: tuple = ()
    latency_regions: tuple = ()
    distraction_windows: tuple = ()
    operator_profile: Optional[OperatorProfile] = None

    def __post_init__(self):
        if self.tick_rate <= 0:
            raise ValueError("tickRate must be positive")
        if not self.goals:
            raise ValueError("scenario needs at least one goal")
        for label, pose in [("start", self.start)] + [
                (f"goal[{i}]", g) for i, g in enumerate(self.goals)]:
            ix, iy = self.static_map.world_to_cell(pose)
            if self.static_map.cells[iy, ix]:
                raise ValueError(f"{label} lies in an occupied cell of the static map")

    @property
    def dt(self) -> float:
        return 1.0 / self.tick_rate

    def to_json(self) -> dict:
        out = {
            "scenarioId": self.scenario_id,
            "staticMap": self.static_map.to_json(),
            "start": self.start.to_json(),
            "goals": [g.to_json() for g in self.goals],
            "seed": self.seed,
            "tickRate": self.tick_rate,
            "trueObstacles": [r.to_json() for r in self.true_obstacles],
            "noiseRegions": [r.to_json() for r in self.noise_regions],
            "latencyRegions": [r.to_json() for r in self.latency_regions],
            "distractionWindows": [w.to_json() for w in self.distraction_windows],
        }
        if self.operator_profile is not None:
            out["operatorProfile"] = self.operator_profile.to_json()
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Scenario":
        profile = data.get("operatorProfile")
        return cls(
            scenario_id=data["scenarioId"],
            static_map=OccupancyGrid.from_json(data["staticMap"]),
            start=Pose.from_json(data["start"]),
            goals=tuple(Pose.from_json(g) for g in data["goals"]),
            seed=data["seed"],
            tick_rate=data.get("tickRate", DEFAULT_TICK_RATE),
            true_obstacles=tuple(Rect.from_json(r) for r in data.get("trueObstacles", [])),
            noise_regions=tuple(NoiseRegion.from_json(r) for r in data.get("noiseRegions", [])),
            latency_regions=tuple(LatencyRegion.from_json(r) for r in data.get("latencyRegions", [])),
            distraction_windows=tuple(DistractionWindow.from_json(w)
                                      for w in data.get("distractionWindows", [])),
            operator_profile=OperatorProfile.from_json(profile) if profile else None,
        )

    def dumps(self) -> str:
        return canonical_dumps(self.to_json(), indent=2) + "\n"

    @classmethod
    def loads(cls, text: str) -> "Scenario":
        return cls.from_json(json.loads(text))

    def save(self, path) -> None:
        with open(path, "w") as f:
            f.write(self.dumps())

    @classmethod
    def load(cls, path) -> "Scenario":
        with open(path) as f:
            return cls.loads(f.read())
