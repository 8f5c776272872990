import copy

import pytest

from emics import presets
from emics.model import ControlMode, LoaMode, Pose, RunLog, TickRecord, Velocity
from emics.runner import (
    ReplayError,
    compute_metrics,
    metrics_csv_row,
    replay,
    run_scenario,
)


def _tick(t, loa=LoaMode.TELEOPERATION, events=()):
    pose = Pose(0.0, 0.0, 0.0)
    return TickRecord(t=t, true_pose=pose, estimated_pose=pose,
                      commanded=Velocity(), executed=Velocity(), loa=loa,
                      s_expert=0.0, e_raw=0.0, e_filtered=0.0,
                      events=list(events))


def _switch_event(initiator):
    return {"kind": "loaSwitch", "from": "teleoperation", "to": "autonomy",
            "initiator": initiator, "reason": ""}


class TestComputeMetrics:
    def test_score_adds_ten_seconds_per_collision(self):
        records = [_tick(i * 0.1) for i in range(3601)]
        records[100].events.append({"kind": "collision"})
        records[500].events.append({"kind": "collision"})
        records[3600].events.append({"kind": "goalReached", "index": 0})
        log = RunLog("m", ControlMode.PURE_TELEOP, {"version": 1}, records)
        m = compute_metrics(log)
        assert m.completion_time == pytest.approx(360.0)
        assert m.collisions == 2
        assert m.score == pytest.approx(380.0)

    def test_contact_events_deduplicated_within_a_second(self):
        records = [_tick(i * 0.1) for i in range(100)]
        for i in range(20, 28):  # one scrape lasting 0.8 s
            records[i].events.append({"kind": "collision"})
        records[60].events.append({"kind": "collision"})
        log = RunLog("m", ControlMode.PURE_TELEOP, {"version": 1}, records)
        assert compute_metrics(log).collisions == 2

    def test_all_teleop_means_zero_autonomy(self):
        log = RunLog("m", ControlMode.PURE_TELEOP, {"version": 1},
                     [_tick(i * 0.1) for i in range(50)])
        m = compute_metrics(log)
        assert m.pct_time_autonomy == 0.0
        assert m.pct_time_teleop == 100.0

    def test_switch_counting_by_initiator(self):
        records = [_tick(i * 0.1) for i in range(30)]
        records[3].events.append(_switch_event("operator"))
        records[9].events.append(_switch_event("emics"))
        records[15].events.append(_switch_event("operator"))
        log = RunLog("m", ControlMode.MIXED_INITIATIVE, {"version": 1}, records)
        m = compute_metrics(log)
        assert m.by_operator == 2
        assert m.by_emics == 1
        assert m.loa_switches_total == 3

    def test_percentages_sum_to_hundred(self):
        records = [_tick(i * 0.1,
                         loa=LoaMode.AUTONOMY if i % 3 else LoaMode.TELEOPERATION)
                   for i in range(31)]
        m = compute_metrics(RunLog("m", ControlMode.MIXED_INITIATIVE,
                                   {"version": 1}, records))
        assert m.pct_time_autonomy + m.pct_time_teleop == pytest.approx(100.0)


class TestRunScenario:
    def test_benign_autonomy_completes_without_collisions(self):
        log = run_scenario(presets.benign(seed=0), ControlMode.PURE_AUTONOMY)
        m = compute_metrics(log)
        assert m.complete
        assert m.collisions == 0

    def test_benign_mi_with_skilled_profile_needs_no_emics(self):
        log = run_scenario(presets.benign(seed=0), ControlMode.MIXED_INITIATIVE)
        m = compute_metrics(log)
        assert m.complete
        assert m.by_emics == 0

    def test_seed_override_is_recorded(self):
        log = run_scenario(presets.benign(seed=0), ControlMode.PURE_AUTONOMY,
                           seed=9)
        assert log.config["seed"] == 9

    def test_csv_row_shape(self):
        log = run_scenario(presets.benign(seed=0), ControlMode.PURE_AUTONOMY)
        row = metrics_csv_row(log, compute_metrics(log))
        assert row[0] == "corridor-benign"
        assert row[1] == "autonomy"
        assert len(row) == 10


@pytest.fixture(scope="module")
def noisy_log():
    return run_scenario(presets.noisy(seed=5), ControlMode.ROBOT_INITIATIVE)


class TestReplay:
    def test_reproduces_byte_identical(self, noisy_log):
        assert replay(noisy_log).to_jsonl() == noisy_log.to_jsonl()

    def test_altered_seed_detected(self, noisy_log):
        tampered = copy.deepcopy(noisy_log)
        tampered.config = copy.deepcopy(tampered.config)
        tampered.config["scenario"]["seed"] = 999
        with pytest.raises(ReplayError):
            replay(tampered)

    def test_truncated_log_detected(self, noisy_log):
        truncated = copy.deepcopy(noisy_log)
        truncated.records = truncated.records[: len(truncated.records) // 2]
        with pytest.raises(ReplayError):
            replay(truncated)

    def test_version_mismatch_refused(self, noisy_log):
        foreign = copy.deepcopy(noisy_log)
        foreign.config = {**foreign.config, "version": 99}
        with pytest.raises(ReplayError, match="version"):
            replay(foreign)


class TestBatchDeterminism:
    def test_noise_regions_make_seeds_matter(self):
        trajs = []
        for seed in (1, 2, 3):
            log = run_scenario(presets.noisy(seed=seed),
                               ControlMode.PURE_AUTONOMY)
            trajs.append([(r.true_pose.x, r.true_pose.y) for r in log.records])
        assert trajs[0] != trajs[1]
        assert trajs[1] != trajs[2]

    def test_no_stochastic_elements_means_identical_trajectories(self):
        trajs = []
        for seed in (1, 2):
            log = run_scenario(presets.benign(seed=seed),
                               ControlMode.PURE_AUTONOMY)
            trajs.append([(r.true_pose.x, r.true_pose.y) for r in log.records])
        assert trajs[0] == trajs[1]
