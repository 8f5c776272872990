"""Built-in scenarios: the standard arenas the test suite and CLI run.

Each builder returns a fully seeded Scenario with an embedded operator
profile, so `run --scenario` needs nothing else. Geometry is meters;
occupancy resolution is 0.05 m/cell.
"""

from __future__ import annotations

import numpy as np

from .grid import OccupancyGrid
from .model import DistractionWindow, LatencyRegion, NoiseRegion, Pose, Rect
from .operators import ExplorationStop, OperatorProfile, Skill, SwitchEagerness
from .scenario import Scenario

RESOLUTION = 0.05
WALL = 0.1  # wall thickness in meters


def _arena(width_m: float, height_m: float) -> OccupancyGrid:
    """Empty rectangular arena enclosed by walls."""
    w = int(round(width_m / RESOLUTION))
    h = int(round(height_m / RESOLUTION))
    cells = np.zeros((h, w), dtype=bool)
    t = int(round(WALL / RESOLUTION))
    cells[:t, :] = True
    cells[-t:, :] = True
    cells[:, :t] = True
    cells[:, -t:] = True
    return OccupancyGrid(w, h, RESOLUTION, Pose(0.0, 0.0), cells)


def _two_room_map() -> OccupancyGrid:
    """Two rooms split by a horizontal wall with two doorways: a near one on
    the left (the static shortest route) and a remote one on the far right.
    A stub wall in the lower room hides the left doorway from the start."""
    grid = _arena(12.0, 8.0)
    cells = grid.cells

    def m(v):
        return int(round(v / RESOLUTION))

    cells[m(3.9):m(4.1), :] = True                 # dividing wall
    cells[m(3.9):m(4.1), m(2.0):m(3.2)] = False    # door A (near)
    cells[m(3.9):m(4.1), m(10.4):m(11.9)] = False  # door B (remote)
    cells[m(0.0):m(3.0), m(5.0):m(5.2)] = True     # stub wall below the divider
    return grid


def skilled_profile(seed: int = 0) -> OperatorProfile:
    return OperatorProfile(skill=Skill(speed_factor=1.0), seed=seed)


def regular_profile(seed: int = 0) -> OperatorProfile:
    return OperatorProfile(skill=Skill(speed_factor=0.9), seed=seed)


def preoccupied_profile(seed: int = 0) -> OperatorProfile:
    """Drives fine but never delegates while busy with the secondary task."""
    return OperatorProfile(
        skill=Skill(speed_factor=0.9),
        eagerness=SwitchEagerness(delegate_on_distraction=False),
        seed=seed,
    )


def override_prone_profile(seed: int = 0) -> OperatorProfile:
    """Explores off-path and refuses every switcher-initiated handover."""
    return OperatorProfile(
        skill=Skill(speed_factor=0.9),
        eagerness=SwitchEagerness(delegate_on_distraction=False),
        override_probability=1.0,
        exploration_stops=(ExplorationStop(6.0, 4.5, dwell=12.0, engage_radius=2.0),),
        seed=seed,
    )


def benign(seed: int = 0) -> Scenario:
    """Straight 10 m corridor run with nothing going wrong."""
    return Scenario(
        scenario_id="corridor-benign",
        static_map=_arena(12.0, 6.0),
        start=Pose(1.0, 3.0),
        goals=(Pose(11.0, 3.0),),
        seed=seed,
        operator_profile=skilled_profile(seed),
    )


def distracted(seed: int = 0, window: float = 20.0) -> Scenario:
    """Corridor run with one long operator distraction window."""
    return Scenario(
        scenario_id="corridor-distracted",
        static_map=_arena(12.0, 6.0),
        start=Pose(1.0, 3.0),
        goals=(Pose(11.0, 3.0),),
        seed=seed,
        distraction_windows=(DistractionWindow(duration=window, at_time=5.0),),
        operator_profile=preoccupied_profile(seed),
    )


def unmapped_box(seed: int = 0) -> Scenario:
    """Two-room map where a box missing from the prior map blocks the near
    doorway; autonomy has to discover it and take the far one."""
    return Scenario(
        scenario_id="rooms-unmapped-box",
        static_map=_two_room_map(),
        start=Pose(10.5, 2.0),
        goals=(Pose(1.0, 6.5),),
        seed=seed,
        true_obstacles=(Rect(1.8, 3.6, 1.6, 0.7),),
        operator_profile=regular_profile(seed),
    )


def conflict(seed: int = 0) -> Scenario:
    """Corridor run where the operator dwells at an off-path inspection point
    the expert knows nothing about."""
    return Scenario(
        scenario_id="corridor-conflict",
        static_map=_arena(12.0, 6.0),
        start=Pose(1.0, 3.0),
        goals=(Pose(11.0, 3.0),),
        seed=seed,
        operator_profile=override_prone_profile(seed),
    )


def noisy(seed: int = 0, sigma: float = 0.2) -> Scenario:
    """Corridor with a laser-noise band in the middle."""
    return Scenario(
        scenario_id="corridor-noisy",
        static_map=_arena(12.0, 6.0),
        start=Pose(1.0, 3.0),
        goals=(Pose(11.0, 3.0),),
        seed=seed,
        noise_regions=(NoiseRegion(Rect(5.0, 0.0, 3.0, 6.0), sigma),),
        operator_profile=regular_profile(seed),
    )


def laggy(seed: int = 0, delay: float = 0.5) -> Scenario:
    """Corridor with a command-latency band (weak link emulation)."""
    return Scenario(
        scenario_id="corridor-laggy",
        static_map=_arena(12.0, 6.0),
        start=Pose(1.0, 3.0),
        goals=(Pose(11.0, 3.0),),
        seed=seed,
        latency_regions=(LatencyRegion(Rect(5.0, 0.0, 3.0, 6.0), delay),),
        operator_profile=regular_profile(seed),
    )


PRESETS = {
    "benign": benign,
    "distracted": distracted,
    "unmapped-box": unmapped_box,
    "conflict": conflict,
    "noisy": noisy,
    "laggy": laggy,
}


def build(name: str, seed: int = 0) -> Scenario:
    try:
        return PRESETS[name](seed)
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
