"""Scripted stand-ins for the human operator.

A driving policy steers along the displayed planner path at a skill-scaled
speed, goes silent during distraction windows, and can divert to inspection
stops that the expert knows nothing about. A judgement policy issues LOA
requests the way attentive operators do (delegate when distracted, rescue a
noise-degraded autonomy); an override policy counters switcher-initiated
LOA changes to reproduce the fight for control.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .model import V_MAX, LoaMode, LoaSwitchEvent, Pose, Velocity, normalize_angle


@dataclass(frozen=True)
class Skill:
    speed_factor: float = 1.0         # fraction of V_MAX the operator drives at
    heading_noise_sigma: float = 0.0  # radians of steering jitter per command

    def __post_init__(self):
        if not 0.0 < self.speed_factor <= 1.0:
            raise ValueError("speedFactor must be in (0, 1]")


@dataclass(frozen=True)
class SwitchEagerness:
    preferred_loa: LoaMode = LoaMode.TELEOPERATION
    reaction_delay: float = 1.0  # seconds from trigger to button press
    # Whether this operator hands over control when the secondary task starts.
    # A preoccupied operator (False) leaves the rescue to the switcher.
    delegate_on_distraction: bool = True


@dataclass(frozen=True)
class ExplorationStop:
    """An off-path inspection point the operator visits without telling the
    expert: drive there once within engage range, hold for `dwell` seconds."""

    x: float
    y: float
    dwell: float
    engage_radius: float = 1.5

    def to_json(self) -> dict:
        return {"x": self.x, "y": self.y, "dwell": self.dwell,
                "engageRadius": self.engage_radius}

    @classmethod
    def from_json(cls, data: dict) -> "ExplorationStop":
        return cls(data["x"], data["y"], data["dwell"],
                   data.get("engageRadius", 1.5))


@dataclass(frozen=True)
class OperatorProfile:
    skill: Skill = Skill()
    eagerness: SwitchEagerness = SwitchEagerness()
    override_probability: float = 0.0
    exploration_stops: tuple = ()
    seed: int = 0

    def to_json(self) -> dict:
        return {
            "skill": {
                "speedFactor": self.skill.speed_factor,
                "headingNoiseSigma": self.skill.heading_noise_sigma,
            },
            "switchEagerness": {
                "preferredLoa": self.eagerness.preferred_loa.value,
                "reactionDelay": self.eagerness.reaction_delay,
                "delegateOnDistraction": self.eagerness.delegate_on_distraction,
            },
            "overrideProbability": self.override_probability,
            "explorationStops": [s.to_json() for s in self.exploration_stops],
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, data: dict) -> "OperatorProfile":
        skill = data.get("skill", {})
        eager = data.get("switchEagerness", {})
        return cls(
            skill=Skill(
                speed_factor=skill.get("speedFactor", 1.0),
                heading_noise_sigma=skill.get("headingNoiseSigma", 0.0),
            ),
            eagerness=SwitchEagerness(
                preferred_loa=LoaMode(eager.get("preferredLoa", "teleoperation")),
                reaction_delay=eager.get("reactionDelay", 1.0),
                delegate_on_distraction=eager.get("delegateOnDistraction", True),
            ),
            override_probability=data.get("overrideProbability", 0.0),
            exploration_stops=tuple(ExplorationStop.from_json(s)
                                    for s in data.get("explorationStops", [])),
            seed=data.get("seed", 0),
        )


@dataclass
class Observation:
    """What the operator can see on the control interface each tick."""

    estimated_pose: Pose
    executed: Velocity
    loa: LoaMode
    goal: Optional[Pose]
    expert_path: list = field(default_factory=list)
    noise_sigma: float = 0.0        # scan corruption visible as a noisy map
    stuck: bool = False             # autonomy reported no usable path
    distraction_active: bool = False
    distraction_onset: Optional[float] = None
    last_switch: Optional[LoaSwitchEvent] = None
    goal_tolerance: float = 0.15


@dataclass
class OperatorAction:
    teleop: Optional[Velocity] = None
    request_switch: bool = False
    set_goal: Optional[Pose] = None  # map click (live operation only)


def _steer_to(pose: Pose, tx: float, ty: float, v_cap: float,
              heading_noise: float) -> Velocity:
    """Pure-pursuit flavored point chase: turn in place on large heading
    error, otherwise drive with speed scaled by alignment."""
    bearing = math.atan2(ty - pose.y, tx - pose.x)
    err = normalize_angle(bearing - pose.theta + heading_noise)
    angular = max(-1.2, min(1.2, 2.0 * err))
    if abs(err) > 1.0:
        return Velocity(0.0, angular)
    return Velocity(v_cap * (1.0 - 0.5 * abs(err)), angular)


class TeleopPolicy:
    """Skill-scaled path following with distraction silence and exploration
    detours; pure given (profile, observation, t, rng draws)."""

    def __init__(self, profile: OperatorProfile, rng: np.random.Generator):
        self.profile = profile
        self.rng = rng
        self._stop_index = 0
        self._dwell_until: Optional[float] = None
        self._engaged = False

    def _active_stop(self, obs: Observation, t: float) -> Optional[ExplorationStop]:
        stops = self.profile.exploration_stops
        if self._stop_index >= len(stops):
            return None
        stop = stops[self._stop_index]
        pose = obs.estimated_pose
        near = math.hypot(pose.x - stop.x, pose.y - stop.y)
        if not self._engaged:
            if near <= stop.engage_radius:
                self._engaged = True
            else:
                return None
        if self._dwell_until is None and near <= 0.25:
            self._dwell_until = t + stop.dwell
        if self._dwell_until is not None and t >= self._dwell_until:
            self._stop_index += 1
            self._dwell_until = None
            self._engaged = False
            return None
        return stop

    def command(self, obs: Observation, t: float) -> Optional[Velocity]:
        if obs.distraction_active:
            return None
        noise = (self.rng.normal(0.0, self.profile.skill.heading_noise_sigma)
                 if self.profile.skill.heading_noise_sigma > 0 else 0.0)
        v_cap = self.profile.skill.speed_factor * V_MAX
        pose = obs.estimated_pose

        stop = self._active_stop(obs, t)
        if stop is not None:
            if self._dwell_until is not None:
                return Velocity(0.0, 0.0)  # holding at the inspection point
            return _steer_to(pose, stop.x, stop.y, min(v_cap, 0.25), noise)

        if obs.goal is None:
            return Velocity(0.0, 0.0)
        dist_goal = pose.distance_to(obs.goal)
        if dist_goal <= obs.goal_tolerance:
            return Velocity(0.0, 0.0)
        tx, ty = obs.goal.x, obs.goal.y
        if obs.expert_path:
            tx, ty = _lookahead_point(obs.expert_path, pose, 0.5)
        v = v_cap
        if dist_goal < 0.5:
            v = min(v, V_MAX * math.sqrt(dist_goal / 0.5))
        return _steer_to(pose, tx, ty, v, noise)


def _lookahead_point(path, pose: Pose, lookahead: float) -> tuple:
    xy = np.array([[p.x, p.y] for p in path])
    d2 = np.sum((xy - [pose.x, pose.y]) ** 2, axis=1)
    idx = int(np.argmin(d2))
    travelled = 0.0
    while idx + 1 < len(xy) and travelled < lookahead:
        travelled += float(np.linalg.norm(xy[idx + 1] - xy[idx]))
        idx += 1
    return float(xy[idx][0]), float(xy[idx][1])


class HiJudgement:
    """Operator-initiated LOA requests: delegate at distraction onset, take
    over when autonomy degrades, drift back to the preferred LOA when idle."""

    DRIFT_FACTOR = 3.0  # drifting home is lazier than reacting to trouble

    def __init__(self, profile: OperatorProfile):
        self.profile = profile
        self._pending: Optional[tuple] = None  # (desired LoaMode, due t, cause)

    def _schedule(self, desired: LoaMode, due: float, cause: str):
        if self._pending is None or self._pending[2] != cause:
            self._pending = (desired, due, cause)

    def request(self, obs: Observation, t: float) -> Optional[LoaMode]:
        eager = self.profile.eagerness
        delay = eager.reaction_delay

        if obs.distraction_active:
            if (eager.delegate_on_distraction and obs.loa is LoaMode.TELEOPERATION
                    and obs.distraction_onset is not None):
                self._schedule(LoaMode.AUTONOMY, obs.distraction_onset + delay,
                               "distraction")
            elif self._pending is not None and self._pending[2] != "distraction":
                self._pending = None
        elif obs.loa is LoaMode.AUTONOMY and (obs.noise_sigma > 0.0 or obs.stuck):
            cause = "stuck" if obs.stuck else "noise"
            self._schedule(LoaMode.TELEOPERATION, t + delay, cause)
        elif obs.loa is not eager.preferred_loa:
            self._schedule(eager.preferred_loa, t + self.DRIFT_FACTOR * delay, "drift")
        else:
            self._pending = None

        if self._pending is not None:
            desired, due, _cause = self._pending
            if obs.loa is desired:
                self._pending = None
            elif t >= due:
                self._pending = None
                return desired
        return None


class OverridePolicy:
    """Counters switcher-initiated LOA changes with a seeded coin flip,
    modeling an operator who refuses to hand over control mid-action."""

    def __init__(self, profile: OperatorProfile, rng: np.random.Generator):
        self.profile = profile
        self.rng = rng
        self._countered: Optional[float] = None  # t of the switch being countered
        self._due: Optional[float] = None

    def request(self, last_switch: Optional[LoaSwitchEvent], t: float) -> bool:
        if (last_switch is not None and last_switch.initiator.value == "emics"
                and last_switch.t != self._countered):
            self._countered = last_switch.t
            if self.rng.random() < self.profile.override_probability:
                self._due = last_switch.t + self.profile.eagerness.reaction_delay
        if self._due is not None and t >= self._due:
            self._due = None
            return True
        return False


class ScriptedOperator:
    """Bundles the per-tick policies behind one seeded RNG."""

    def __init__(self, profile: OperatorProfile, operator_may_switch: bool):
        self.profile = profile
        self.rng = np.random.default_rng(profile.seed)
        self.teleop = TeleopPolicy(profile, self.rng)
        self.judgement = HiJudgement(profile)
        self.override = OverridePolicy(profile, self.rng)
        self.operator_may_switch = operator_may_switch

    def act(self, obs: Observation, t: float) -> OperatorAction:
        action = OperatorAction()
        if obs.loa is LoaMode.TELEOPERATION:
            action.teleop = self.teleop.command(obs, t)
        if self.operator_may_switch:
            wants = self.judgement.request(obs, t)
            countered = self.override.request(obs.last_switch, t)
            if countered or (wants is not None and wants is not obs.loa):
                action.request_switch = True
        return action
