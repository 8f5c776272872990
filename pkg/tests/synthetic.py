"""Synthetic calibration logs with a planted switcher.

Each log is a cruising robot interrupted by degradation episodes of varied
depth (full stall, partial slowdown, and sub-threshold dips) plus brief
spikes the filter is supposed to ignore. Amplitude diversity matters: with
only constant-depth episodes, many (alpha, threshold) pairs cross at the
same instant and the planted pair would not be identifiable.
"""

import numpy as np

from emics.calibration import propose_switches
from emics.model import ControlMode, LoaMode, Pose, RunLog, TickRecord, Velocity

DT = 0.1
CRUISE = 0.35
EPISODE_DEPTHS = (0.1, 0.08, 0.1, 0.06)  # cycled per episode; 0.06 never fires


def speeds_log(expert, robot, switch_times=()):
    records = []
    switch_times = list(switch_times)
    for i, (se, sr) in enumerate(zip(expert, robot)):
        t = i * DT
        events = []
        for ts in switch_times:
            if abs(ts - t) < DT / 2:
                events.append({"kind": "loaSwitch", "from": "teleoperation",
                               "to": "autonomy", "initiator": "operator",
                               "reason": ""})
        pose = Pose(0.0, 0.0, 0.0)
        records.append(TickRecord(
            t=t, true_pose=pose, estimated_pose=pose,
            commanded=Velocity(sr, 0.0), executed=Velocity(sr, 0.0),
            loa=LoaMode.TELEOPERATION, s_expert=se, e_raw=max(0.0, se - sr),
            e_filtered=0.0, events=events))
    return RunLog("synthetic", ControlMode.HUMAN_INITIATIVE, {"version": 1},
                  records=records)


def planted_log(rng, total=120.0, episodes=4, alpha=0.06, threshold=0.07,
                jitter=0.3, lockout=2.0):
    """One synthetic trial whose operator switches are the planted switcher's
    own proposals, jittered by up to +-jitter seconds."""
    n = int(total / DT)
    expert = np.full(n, CRUISE)
    robot = np.full(n, CRUISE)

    starts = np.sort(rng.uniform(5.0, total - 15.0, size=episodes))
    while np.any(np.diff(starts) < 15.0):
        starts = np.sort(rng.uniform(5.0, total - 15.0, size=episodes))
    for k, start in enumerate(starts):
        depth = EPISODE_DEPTHS[k % len(EPISODE_DEPTHS)]
        duration = float(rng.uniform(5.5, 8.0))
        i0, i1 = int(start / DT), min(int((start + duration) / DT), n)
        expert[i0:i1] = CRUISE
        robot[i0:i1] = CRUISE - depth

    # short spikes that a fitted filter must shrug off
    for _ in range(2):
        i0 = int(rng.uniform(5.0, total - 5.0) / DT)
        if np.all(robot[max(0, i0 - 30):i0 + 30] == CRUISE):
            robot[i0:i0 + 3] = CRUISE - 0.1

    bare = speeds_log(expert, robot)
    planted = propose_switches(bare, alpha, threshold, lockout=lockout)
    actual = [t + float(rng.uniform(-jitter, jitter)) for t in planted]
    return speeds_log(expert, robot, switch_times=actual)


def planted_logs(count=10, seed=0, **kw):
    rng = np.random.default_rng(seed)
    return [planted_log(rng, **kw) for _ in range(count)]
