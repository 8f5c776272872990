import pytest

from emics.errorsignal import ErrorFilter, ErrorFilterConfig
from emics.model import ControlMode, Initiator, LoaMode, LoaSwitchEvent
from emics.switchers import (
    AuthorityPolicy,
    EmicsSwitcher,
    ThresholdSwitcherConfig,
    apply_switch_request,
    denial_reason,
    emics_decide,
    notify,
    threshold_decide,
)


class TestThresholdSwitcher:
    def setup_method(self):
        self.cfg = ThresholdSwitcherConfig(threshold=0.07)

    def test_fires_above(self):
        assert threshold_decide(0.0711, self.cfg) is True

    def test_strict_at_boundary(self):
        assert threshold_decide(0.07, self.cfg) is False

    def test_zero(self):
        assert threshold_decide(0.0, self.cfg) is False

    def test_config_validation(self):
        with pytest.raises(ValueError):
            ThresholdSwitcherConfig(threshold=0.0)
        with pytest.raises(ValueError):
            ThresholdSwitcherConfig(threshold=0.2)


class TestAuthorityPolicy:
    @pytest.mark.parametrize("mode,op,emics", [
        (ControlMode.PURE_TELEOP, False, False),
        (ControlMode.PURE_AUTONOMY, False, False),
        (ControlMode.HUMAN_INITIATIVE, True, False),
        (ControlMode.ROBOT_INITIATIVE, False, True),
        (ControlMode.MIXED_INITIATIVE, True, True),
    ])
    def test_matrix(self, mode, op, emics):
        policy = AuthorityPolicy.for_mode(mode)
        assert policy.operator_may_switch is op
        assert policy.emics_may_switch is emics

    def test_mi_operator_toggles(self):
        policy = AuthorityPolicy.for_mode(ControlMode.MIXED_INITIATIVE)
        out = apply_switch_request(LoaMode.AUTONOMY, Initiator.OPERATOR, policy)
        assert out is LoaMode.TELEOPERATION

    def test_ri_operator_denied(self):
        policy = AuthorityPolicy.for_mode(ControlMode.ROBOT_INITIATIVE)
        assert apply_switch_request(LoaMode.AUTONOMY, Initiator.OPERATOR,
                                    policy) is None
        assert "RI" in denial_reason(Initiator.OPERATOR, policy)

    def test_pure_teleop_emics_denied(self):
        policy = AuthorityPolicy.for_mode(ControlMode.PURE_TELEOP)
        assert apply_switch_request(LoaMode.TELEOPERATION, Initiator.EMICS,
                                    policy) is None

    def test_double_toggle_returns_to_origin(self):
        policy = AuthorityPolicy.for_mode(ControlMode.MIXED_INITIATIVE)
        for start in LoaMode:
            once = apply_switch_request(start, Initiator.EMICS, policy)
            twice = apply_switch_request(once, Initiator.OPERATOR, policy)
            assert twice is start


class TestEmicsDecide:
    def setup_method(self):
        self.filter = ErrorFilter(ErrorFilterConfig())
        self.switcher = EmicsSwitcher()

    def test_switches_on_large_error_forward(self):
        out = emics_decide(0.09, 0.2, now=5.0, filter_state=self.filter,
                           switcher=self.switcher)
        assert out.should_switch is True
        assert out.initiator is Initiator.EMICS
        assert "reversing" in out.reason

    def test_reversing_exemption(self):
        out = emics_decide(0.09, -0.3, now=5.0, filter_state=self.filter,
                           switcher=self.switcher)
        assert out.should_switch is False

    def test_lockout_suppresses(self):
        self.filter.reset_on_switch(now=4.5)
        out = emics_decide(0.09, 0.2, now=5.0, filter_state=self.filter,
                           switcher=self.switcher)
        assert out.should_switch is False
        assert "lockout" in out.reason

    def test_threshold_fires_where_fuzzy_exempts(self):
        # reversing trace: the plain threshold rule is the more intrusive one
        cfg = ThresholdSwitcherConfig(threshold=0.07)
        assert threshold_decide(0.09, cfg) is True
        out = emics_decide(0.09, -0.3, now=0.0, filter_state=self.filter)
        assert out.should_switch is False


class TestNotify:
    def _event(self, t, initiator):
        return LoaSwitchEvent(t=t, from_loa=LoaMode.TELEOPERATION,
                              to_loa=LoaMode.AUTONOMY, initiator=initiator,
                              reason="why")

    def test_field_mapping_emics(self):
        note = notify(self._event(3.2, Initiator.EMICS))
        assert note == {"type": "loaSwitch", "t": 3.2, "loa": "autonomy",
                        "initiator": "emics", "reason": "why"}

    def test_field_mapping_operator(self):
        note = notify(self._event(4.0, Initiator.OPERATOR))
        assert note["initiator"] == "operator"

    def test_order_preserved(self):
        notes = [notify(self._event(t, Initiator.EMICS)) for t in (1.0, 2.0)]
        assert [n["t"] for n in notes] == [1.0, 2.0]
