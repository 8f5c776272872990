"""Variable-autonomy control stack: expert-guided LOA switching, a deterministic
2D teleoperation simulator, scripted operators, calibration, and metrics."""

from .model import (
    ACCEL_STEP,
    E_MAX,
    V_MAX,
    ControlMode,
    Initiator,
    LoaMode,
    LoaSwitchEvent,
    Pose,
    RunLog,
    TickRecord,
    Velocity,
    normalize_angle,
)
from .grid import OccupancyGrid, OutOfMapError
from .fuzzy import MamdaniEngine, emics_engine
from .errorsignal import ErrorFilter, ErrorFilterConfig, raw_error
from .planner import ExpertPlanner, PlannerConfig, plan_global, suggest_speed
from .switchers import (
    AuthorityPolicy,
    EmicsSwitcher,
    ThresholdSwitcherConfig,
    apply_switch_request,
    threshold_decide,
)

__version__ = "0.1.0"
