"""Goal-directed motion error and its exponential moving average.

The raw error is the shortfall of the robot's forward speed against the
expert suggestion, clamped into [0, E_MAX]; the filter smooths it with
E_t = alpha * e_t + (1 - alpha) * E_{t-1} and is re-initialized (and held
at zero for a lockout period) after every LOA switch.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import E_MAX


def raw_error(s_expert: float, s_robot: float) -> float:
    """Speed shortfall against the expert, clamped into [0, E_MAX]."""
    return min(max(s_expert - s_robot, 0.0), E_MAX)


@dataclass
class ErrorFilterConfig:
    alpha: float = 0.06
    e_max: float = E_MAX
    lockout_seconds: float = 2.0

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha}")

    def to_json(self) -> dict:
        return {"alpha": self.alpha, "eMax": self.e_max,
                "lockoutSeconds": self.lockout_seconds}

    @classmethod
    def from_json(cls, data: dict) -> "ErrorFilterConfig":
        return cls(alpha=data.get("alpha", 0.06),
                   e_max=data.get("eMax", E_MAX),
                   lockout_seconds=data.get("lockoutSeconds", 2.0))


class ErrorFilter:
    """Single-owner EMA state; one instance per run, not shared across threads."""

    def __init__(self, config: ErrorFilterConfig = None):
        self.config = config or ErrorFilterConfig()
        self.e_raw = 0.0
        self.e_filtered = 0.0
        self.suppressed_until = float("-inf")

    def in_lockout(self, now: float) -> bool:
        return now < self.suppressed_until

    def update(self, e_raw: float, now: float) -> float:
        """Advance the EMA by one sample; held at zero during lockout."""
        cfg = self.config
        self.e_raw = min(max(e_raw, 0.0), cfg.e_max)
        if self.in_lockout(now):
            self.e_filtered = 0.0
        else:
            ema = cfg.alpha * self.e_raw + (1.0 - cfg.alpha) * self.e_filtered
            self.e_filtered = min(max(ema, 0.0), cfg.e_max)
        return self.e_filtered

    def reset_on_switch(self, now: float) -> None:
        """Zero the average after a LOA switch and suppress until the lockout ends."""
        self.e_filtered = 0.0
        self.suppressed_until = now + self.config.lockout_seconds
