"""Shared domain types: poses, velocities, LOA/control modes, scenarios, run logs."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

# Platform limits shared across the stack.
V_MAX = 0.4          # m/s, robot top speed (forward and reverse)
ACCEL_STEP = 0.1     # m/s, max change of commanded linear speed per tick
E_MAX = 0.1          # m/s, ceiling of the goal-directed motion error
DEFAULT_TICK_RATE = 10.0  # Hz


def normalize_angle(theta: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    if not math.isfinite(theta):
        raise ValueError(f"angle must be finite, got {theta!r}")
    wrapped = math.fmod(theta, 2.0 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    elif wrapped > math.pi:
        wrapped -= 2.0 * math.pi
    return wrapped


@dataclass(frozen=True)
class Pose:
    """2D pose in world coordinates. x, y in meters, theta in radians."""

    x: float
    y: float
    theta: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError("pose coordinates must be finite")
        object.__setattr__(self, "theta", normalize_angle(self.theta))

    def distance_to(self, other: "Pose") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def to_json(self) -> list:
        return [self.x, self.y, self.theta]

    @classmethod
    def from_json(cls, data) -> "Pose":
        if isinstance(data, dict):
            return cls(data["x"], data["y"], data.get("theta", 0.0))
        return cls(data[0], data[1], data[2] if len(data) > 2 else 0.0)


@dataclass(frozen=True)
class Velocity:
    """Commanded or executed body velocity. linear in m/s (|linear| <= V_MAX
    once executed), angular in rad/s."""

    linear: float = 0.0
    angular: float = 0.0

    def to_json(self) -> list:
        return [self.linear, self.angular]

    @classmethod
    def from_json(cls, data) -> "Velocity":
        return cls(data[0], data[1])


ZERO_VELOCITY = Velocity(0.0, 0.0)


class LoaMode(str, Enum):
    TELEOPERATION = "teleoperation"
    AUTONOMY = "autonomy"

    def other(self) -> "LoaMode":
        return LoaMode.AUTONOMY if self is LoaMode.TELEOPERATION else LoaMode.TELEOPERATION


class ControlMode(str, Enum):
    """Which agents hold LOA-switching authority during a run."""

    PURE_TELEOP = "teleop"
    PURE_AUTONOMY = "autonomy"
    HUMAN_INITIATIVE = "hi"
    ROBOT_INITIATIVE = "ri"
    MIXED_INITIATIVE = "mi"


class Initiator(str, Enum):
    OPERATOR = "operator"
    EMICS = "emics"


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle in world coordinates (meters)."""

    x: float
    y: float
    w: float
    h: float

    def contains(self, px: float, py: float) -> bool:
        return self.x <= px <= self.x + self.w and self.y <= py <= self.y + self.h

    def to_json(self) -> dict:
        return {"x": self.x, "y": self.y, "w": self.w, "h": self.h}

    @classmethod
    def from_json(cls, data: dict) -> "Rect":
        return cls(data["x"], data["y"], data["w"], data["h"])


@dataclass(frozen=True)
class NoiseRegion:
    rect: Rect
    sigma: float  # meters, stddev added to laser ranges inside the region

    def to_json(self) -> dict:
        return {"rect": self.rect.to_json(), "sigma": self.sigma}

    @classmethod
    def from_json(cls, data: dict) -> "NoiseRegion":
        return cls(Rect.from_json(data["rect"]), data["sigma"])


@dataclass(frozen=True)
class LatencyRegion:
    rect: Rect
    delay: float  # seconds added to operator commands issued inside the region

    def to_json(self) -> dict:
        return {"rect": self.rect.to_json(), "delay": self.delay}

    @classmethod
    def from_json(cls, data: dict) -> "LatencyRegion":
        return cls(Rect.from_json(data["rect"]), data["delay"])


@dataclass(frozen=True)
class DistractionWindow:
    """Interval during which the scripted operator issues no commands.

    Armed either by the robot entering a trigger rectangle (once) or by a
    wall-clock trigger time; active for `duration` seconds from onset.
    """

    duration: float
    rect: Optional[Rect] = None
    at_time: Optional[float] = None

    def __post_init__(self):
        if (self.rect is None) == (self.at_time is None):
            raise ValueError("distraction window needs exactly one of rect or atTime")

    def to_json(self) -> dict:
        out: dict = {"duration": self.duration}
        if self.rect is not None:
            out["rect"] = self.rect.to_json()
        if self.at_time is not None:
            out["atTime"] = self.at_time
        return out

    @classmethod
    def from_json(cls, data: dict) -> "DistractionWindow":
        rect = Rect.from_json(data["rect"]) if "rect" in data else None
        return cls(data["duration"], rect=rect, at_time=data.get("atTime"))


@dataclass(frozen=True)
class LoaSwitchEvent:
    t: float
    from_loa: LoaMode
    to_loa: LoaMode
    initiator: Initiator
    reason: str = ""

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "from": self.from_loa.value,
            "to": self.to_loa.value,
            "initiator": self.initiator.value,
            "reason": self.reason,
        }

    @classmethod
    def from_json(cls, data: dict) -> "LoaSwitchEvent":
        return cls(
            t=data["t"],
            from_loa=LoaMode(data["from"]),
            to_loa=LoaMode(data["to"]),
            initiator=Initiator(data["initiator"]),
            reason=data.get("reason", ""),
        )


@dataclass
class TickRecord:
    """One simulator tick as persisted to the run log."""

    t: float
    true_pose: Pose
    estimated_pose: Pose
    commanded: Velocity
    executed: Velocity
    loa: LoaMode
    s_expert: float
    e_raw: float
    e_filtered: float
    events: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "type": "tick",
            "t": self.t,
            "truePose": self.true_pose.to_json(),
            "estimatedPose": self.estimated_pose.to_json(),
            "commanded": self.commanded.to_json(),
            "executed": self.executed.to_json(),
            "loa": self.loa.value,
            "sExpert": self.s_expert,
            "eRaw": self.e_raw,
            "eFiltered": self.e_filtered,
            "events": self.events,
        }

    @classmethod
    def from_json(cls, data: dict) -> "TickRecord":
        return cls(
            t=data["t"],
            true_pose=Pose.from_json(data["truePose"]),
            estimated_pose=Pose.from_json(data["estimatedPose"]),
            commanded=Velocity.from_json(data["commanded"]),
            executed=Velocity.from_json(data["executed"]),
            loa=LoaMode(data["loa"]),
            s_expert=data["sExpert"],
            e_raw=data["eRaw"],
            e_filtered=data["eFiltered"],
            events=data.get("events", []),
        )


@dataclass
class RunLog:
    """Per-run trace: header metadata plus one TickRecord per tick.

    The LOA switch index is derived from the tick events so the on-disk
    format stays exactly one header line plus one tick line each.
    """

    scenario_id: str
    control_mode: ControlMode
    config: dict
    records: list = field(default_factory=list)
    complete: bool = True

    @property
    def switches(self) -> list:
        out = []
        for rec in self.records:
            for ev in rec.events:
                if ev.get("kind") == "loaSwitch" and not ev.get("denied", False):
                    out.append(
                        LoaSwitchEvent(
                            t=rec.t,
                            from_loa=LoaMode(ev["from"]),
                            to_loa=LoaMode(ev["to"]),
                            initiator=Initiator(ev["initiator"]),
                            reason=ev.get("reason", ""),
                        )
                    )
        return out

    def header_json(self) -> dict:
        return {
            "type": "header",
            "scenarioId": self.scenario_id,
            "controlMode": self.control_mode.value,
            "complete": self.complete,
            "config": self.config,
        }

    def to_jsonl(self) -> str:
        lines = [canonical_dumps(self.header_json())]
        lines.extend(canonical_dumps(r.to_json()) for r in self.records)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "RunLog":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty run log")
        header = json.loads(lines[0])
        if header.get("type") != "header":
            raise ValueError("run log must start with a header line")
        records = []
        for ln in lines[1:]:
            data = json.loads(ln)
            if data.get("type") != "tick":
                raise ValueError(f"unexpected line type {data.get('type')!r}")
            records.append(TickRecord.from_json(data))
        return cls(
            scenario_id=header["scenarioId"],
            control_mode=ControlMode(header["controlMode"]),
            config=header["config"],
            records=records,
            complete=header.get("complete", True),
        )

    def save(self, path) -> None:
        with open(path, "w") as f:
            f.write(self.to_jsonl())

    @classmethod
    def load(cls, path) -> "RunLog":
        with open(path) as f:
            return cls.from_jsonl(f.read())


def canonical_dumps(obj, indent: Optional[int] = None) -> str:
    """Deterministic JSON encoding; identical objects give identical bytes."""
    return json.dumps(obj, sort_keys=True, indent=indent,
                      separators=(",", ":") if indent is None else (",", ": "))
