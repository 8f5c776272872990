import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from emics.grid import OccupancyGrid
from emics.model import Pose
from emics.planner import (
    ExpertPlanner,
    PlannerConfig,
    plan_global,
    suggest_speed,
)

import oracles

FLAT = PlannerConfig(inflation_radius=0.0)


def empty_grid(n=10, res=1.0):
    return OccupancyGrid(n, n, res)


class TestPlanGlobal:
    def test_straight_line_cost(self):
        path = plan_global(empty_grid(), Pose(0.5, 0.5), Pose(0.5, 9.5), FLAT)
        assert path is not None
        assert path.cost == pytest.approx(9.0)
        assert len(path.cells) == 10

    def test_diagonal_cost(self):
        path = plan_global(empty_grid(), Pose(0.5, 0.5), Pose(9.5, 9.5), FLAT)
        assert path.cost == pytest.approx(9.0 * math.sqrt(2.0))

    def test_goal_in_occupied_region(self):
        grid = empty_grid()
        grid.cells[5:8, 5:8] = True
        assert plan_global(grid, Pose(0.5, 0.5), Pose(6.5, 6.5), FLAT) is None

    def test_unreachable_goal(self):
        grid = empty_grid()
        grid.cells[:, 5] = True  # full wall
        assert plan_global(grid, Pose(0.5, 0.5), Pose(9.5, 0.5), FLAT) is None

    def test_deterministic(self):
        grid = empty_grid(15)
        rng = np.random.default_rng(3)
        grid.cells[rng.random((15, 15)) < 0.2] = True
        grid.cells[0, 0] = grid.cells[14, 14] = False
        a = plan_global(grid, Pose(0.5, 0.5), Pose(14.5, 14.5), FLAT)
        b = plan_global(grid, Pose(0.5, 0.5), Pose(14.5, 14.5), FLAT)
        if a is None:
            assert b is None
        else:
            assert a.cells == b.cells

    def test_no_corner_cutting(self):
        grid = empty_grid(4)
        grid.cells[1, 0] = True
        grid.cells[0, 1] = True
        path = plan_global(grid, Pose(0.5, 0.5), Pose(3.5, 3.5), FLAT)
        assert path is None  # the only way out is the blocked diagonal

    @pytest.mark.parametrize("seed", range(25))
    def test_matches_bfs_oracle_four_connected(self, seed):
        rng = np.random.default_rng(seed)
        cells = rng.random((20, 20)) < 0.25
        free = np.argwhere(~cells)
        start_iy, start_ix = free[rng.integers(len(free))]
        goal_iy, goal_ix = free[rng.integers(len(free))]
        grid = OccupancyGrid(20, 20, 1.0, cells=cells)
        expected = oracles.bfs_cost(cells.tolist(), (start_ix, start_iy),
                                    (goal_ix, goal_iy))
        path = plan_global(grid, Pose(start_ix + 0.5, start_iy + 0.5),
                           Pose(goal_ix + 0.5, goal_iy + 0.5), FLAT,
                           connectivity=4)
        if expected is None:
            assert path is None
        else:
            assert path.cost == pytest.approx(float(expected))


class TestSuggestSpeed:
    def _straight_path(self, length=80):
        grid = OccupancyGrid(length, 3, 0.05)
        return plan_global(grid, Pose(0.1, 0.075), Pose(length * 0.05 - 0.1, 0.075),
                           FLAT)

    def test_goal_reached_means_zero(self):
        path = self._straight_path()
        goal = path.poses[-1]
        out = suggest_speed(path, Pose(goal.x - 0.05, goal.y), 0.3, FLAT)
        assert out.s_expert == 0.0

    def test_acceleration_cap_from_rest(self):
        path = self._straight_path()
        out = suggest_speed(path, path.poses[0], 0.0, FLAT)
        assert out.s_expert == pytest.approx(0.1)

    def test_cruise_at_v_max_on_straight(self):
        path = self._straight_path()
        out = suggest_speed(path, path.poses[5], 0.4, FLAT)
        assert out.s_expert == pytest.approx(0.4)

    def test_deceleration_profile_near_goal(self):
        path = self._straight_path()
        xy = path.xy
        remaining = path.remaining
        idx = int(np.argmin(np.abs(remaining - 0.2)))
        out = suggest_speed(path, Pose(xy[idx][0], xy[idx][1]), 0.4, FLAT)
        d = remaining[idx]
        assert out.s_expert == pytest.approx(0.4 * math.sqrt(d / FLAT.decel_distance))

    def test_no_path_means_zero(self):
        out = suggest_speed(None, Pose(0, 0), 0.2, FLAT)
        assert out.s_expert == 0.0
        assert out.distance_to_goal == math.inf

    @given(st.floats(min_value=0.0, max_value=0.4),
           st.integers(min_value=0, max_value=75))
    @settings(max_examples=40, deadline=None)
    def test_admissible_suggestion(self, s_robot, idx):
        path = self._straight_path()
        pose = path.poses[min(idx, len(path.poses) - 1)]
        out = suggest_speed(path, pose, s_robot, FLAT)
        assert out.s_expert - s_robot <= FLAT.accel_step + 1e-12
        assert out.s_expert >= 0.0

    def test_off_path_robot_reanchored(self):
        path = self._straight_path()
        out = suggest_speed(path, Pose(2.0, 3.0), 0.2, FLAT)  # 3 m off the path
        assert out.s_expert >= 0.0
        assert math.isfinite(out.distance_to_goal)


def test_monotone_progress_following_expert_speeds():
    """A point robot obeying the suggested speed along the path terminates."""
    grid = OccupancyGrid(120, 80, 0.05)
    cfg = PlannerConfig(inflation_radius=0.0)
    start, goal = Pose(0.2, 0.2), Pose(5.5, 3.8)
    path = plan_global(grid, start, goal, cfg)
    assert path is not None
    xy = path.xy
    seg = np.linalg.norm(np.diff(xy, axis=0), axis=1)
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    arc, speed, dt = 0.0, 0.0, 0.1
    for _ in range(5000):
        pos = np.interp(arc, cum, xy[:, 0]), np.interp(arc, cum, xy[:, 1])
        out = suggest_speed(path, Pose(pos[0], pos[1]), speed, cfg)
        if out.distance_to_goal <= cfg.goal_tolerance:
            break
        speed = out.s_expert
        arc = min(arc + speed * dt, cum[-1])
    else:
        pytest.fail("expert speeds never reached the goal")


def test_expert_planner_caches_until_goal_change():
    grid = OccupancyGrid(60, 60, 0.05)
    planner = ExpertPlanner(grid, PlannerConfig(inflation_radius=0.0))
    planner.set_goal(Pose(0.2, 0.2), Pose(2.5, 2.5))
    first = planner.path
    planner.suggest(Pose(0.3, 0.25), 0.1, now=1.0)
    assert planner.path is first  # still on corridor: no replanning
    planner.set_goal(Pose(0.3, 0.25), Pose(1.0, 2.0))
    assert planner.path is not first
