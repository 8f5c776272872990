import math

import pytest
from hypothesis import given, strategies as st

from emics.grid import OccupancyGrid, OutOfMapError
from emics.model import (
    LoaMode,
    Pose,
    RunLog,
    TickRecord,
    Velocity,
    normalize_angle,
)
from emics import presets


class TestNormalizeAngle:
    def test_identity(self):
        assert normalize_angle(0.0) == 0.0

    def test_mod_two_pi(self):
        assert normalize_angle(3 * math.pi) == pytest.approx(math.pi)

    def test_negative_pi_maps_to_open_interval_representative(self):
        assert normalize_angle(-math.pi) == pytest.approx(math.pi)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            normalize_angle(float("nan"))
        with pytest.raises(ValueError):
            normalize_angle(float("inf"))

    @given(st.floats(min_value=-1e6, max_value=1e6))
    def test_wraps_into_interval_and_preserves_angle(self, theta):
        wrapped = normalize_angle(theta)
        assert -math.pi < wrapped <= math.pi
        assert math.isclose(math.sin(wrapped), math.sin(theta), abs_tol=1e-6)
        assert math.isclose(math.cos(wrapped), math.cos(theta), abs_tol=1e-6)


class TestWorldToCell:
    def setup_method(self):
        self.grid = OccupancyGrid(20, 20, 0.05)

    def test_origin(self):
        assert self.grid.world_to_cell(Pose(0.0, 0.0)) == (0, 0)

    def test_floor_division(self):
        assert self.grid.world_to_cell(Pose(0.26, 0.11)) == (5, 2)

    def test_out_of_bounds(self):
        with pytest.raises(OutOfMapError):
            self.grid.world_to_cell(Pose(2.0, 0.1))
        with pytest.raises(OutOfMapError):
            self.grid.world_to_cell(Pose(-0.01, 0.1))


def test_grid_row_roundtrip():
    grid = OccupancyGrid.from_rows(["#..", ".#.", "..#"], 0.1)
    again = OccupancyGrid.from_json(grid.to_json())
    assert again.to_rows() == grid.to_rows()
    assert again.resolution == grid.resolution


def test_scenario_roundtrip_is_byte_identical():
    scenario = presets.unmapped_box(seed=42)
    text = scenario.dumps()
    reparsed = type(scenario).loads(text)
    assert reparsed.dumps() == text


def test_pose_normalizes_theta():
    assert Pose(0, 0, 3 * math.pi).theta == pytest.approx(math.pi)


def _tick(t, events=()):
    pose = Pose(0.0, 0.0, 0.0)
    return TickRecord(t=t, true_pose=pose, estimated_pose=pose,
                      commanded=Velocity(), executed=Velocity(),
                      loa=LoaMode.TELEOPERATION, s_expert=0.0, e_raw=0.0,
                      e_filtered=0.0, events=list(events))


def test_runlog_roundtrip_and_duration():
    from emics.model import ControlMode
    dt = 0.1
    log = RunLog("test", ControlMode.PURE_TELEOP, {"version": 1},
                 records=[_tick(i * dt) for i in range(25)])
    text = log.to_jsonl()
    again = RunLog.from_jsonl(text)
    assert again.to_jsonl() == text
    assert (len(again.records) - 1) * dt == pytest.approx(again.records[-1].t)


def test_runlog_switch_index_derived_from_events():
    from emics.model import ControlMode
    log = RunLog("test", ControlMode.MIXED_INITIATIVE, {},
                 records=[
                     _tick(0.0),
                     _tick(0.1, [{"kind": "loaSwitch", "from": "teleoperation",
                                  "to": "autonomy", "initiator": "emics",
                                  "reason": "x"}]),
                     _tick(0.2, [{"kind": "switchDenied", "initiator": "operator",
                                  "reason": "RI"}]),
                 ])
    switches = log.switches
    assert len(switches) == 1
    assert switches[0].t == pytest.approx(0.1)
    assert switches[0].to_loa is LoaMode.AUTONOMY


def test_runlog_rejects_garbage():
    with pytest.raises(ValueError):
        RunLog.from_jsonl("")
    with pytest.raises(ValueError):
        RunLog.from_jsonl('{"type":"tick"}')
