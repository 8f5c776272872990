"""LOA switching policies and the control-mode authority rules.

Two switcher implementations share the filtered error signal: a plain
threshold rule (fires whenever the smoothed error exceeds 0.07 m/s) and
the fuzzy engine, which additionally exempts a reversing robot. Control
modes decide who may act on a switch decision at all.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errorsignal import ErrorFilter
from .fuzzy import MamdaniEngine, emics_engine
from .model import ControlMode, Initiator, LoaMode, LoaSwitchEvent


@dataclass
class ThresholdSwitcherConfig:
    threshold: float = 0.07  # m/s, fitted on operator switching data

    def __post_init__(self):
        if not 0.0 < self.threshold <= 0.1:
            raise ValueError(f"threshold must be in (0, 0.1], got {self.threshold}")

    def to_json(self) -> dict:
        return {"threshold": self.threshold}

    @classmethod
    def from_json(cls, data: dict) -> "ThresholdSwitcherConfig":
        return cls(threshold=data.get("threshold", 0.07))


def threshold_decide(e_filtered: float, cfg: ThresholdSwitcherConfig) -> bool:
    """Strict comparison: exact equality with the threshold does not fire."""
    return e_filtered > cfg.threshold


@dataclass(frozen=True)
class SwitchDecision:
    should_switch: bool
    reason: str = ""
    initiator: Initiator = Initiator.EMICS


@dataclass(frozen=True)
class AuthorityPolicy:
    """Who may initiate LOA switches under each control mode."""

    control_mode: ControlMode
    operator_may_switch: bool
    emics_may_switch: bool

    @classmethod
    def for_mode(cls, mode: ControlMode) -> "AuthorityPolicy":
        table = {
            ControlMode.PURE_TELEOP: (False, False),
            ControlMode.PURE_AUTONOMY: (False, False),
            ControlMode.HUMAN_INITIATIVE: (True, False),
            ControlMode.ROBOT_INITIATIVE: (False, True),
            ControlMode.MIXED_INITIATIVE: (True, True),
        }
        op, emics = table[mode]
        return cls(mode, op, emics)

    def allows(self, requester: Initiator) -> bool:
        if requester is Initiator.OPERATOR:
            return self.operator_may_switch
        return self.emics_may_switch


class EmicsSwitcher:
    """Fuzzy switcher wrapper that honors the post-switch lockout."""

    def __init__(self, engine: MamdaniEngine = None):
        self.engine = engine or emics_engine()

    def decide(self, e_filtered: float, s_robot: float, now: float,
               filter_state: ErrorFilter) -> SwitchDecision:
        if filter_state.in_lockout(now):
            return SwitchDecision(False, reason="within post-switch lockout")
        decision = self.engine.decide(error=e_filtered, speed=s_robot)
        if decision.switch:
            return SwitchDecision(
                True, reason="large goal-directed error while not reversing")
        return SwitchDecision(False)


def emics_decide(e_filtered: float, s_robot: float, now: float,
                 filter_state: ErrorFilter,
                 switcher: EmicsSwitcher = None) -> SwitchDecision:
    return (switcher or EmicsSwitcher()).decide(e_filtered, s_robot, now, filter_state)


def apply_switch_request(current: LoaMode, requester: Initiator,
                         policy: AuthorityPolicy):
    """Toggled LOA when the requester holds authority, else None (denied).

    The caller appends the LoaSwitchEvent and resets the error filter on
    success; a denial carries no state change.
    """
    if not policy.allows(requester):
        return None
    return current.other()


def denial_reason(requester: Initiator, policy: AuthorityPolicy) -> str:
    mode = policy.control_mode
    if requester is Initiator.OPERATOR:
        if mode is ControlMode.ROBOT_INITIATIVE:
            return "RI mode: operator LOA switching is disabled"
        return f"{mode.value} mode: operator may not switch LOA"
    return f"{mode.value} mode: the switcher may not change LOA"


def notify(event: LoaSwitchEvent) -> dict:
    """Structured notification for the gateway event stream."""
    return {
        "type": "loaSwitch",
        "t": event.t,
        "loa": event.to_loa.value,
        "initiator": event.initiator.value,
        "reason": event.reason,
    }
