import math

import pytest
from hypothesis import given, strategies as st

from emics.errorsignal import ErrorFilter, ErrorFilterConfig, raw_error
from emics.switchers import ThresholdSwitcherConfig, threshold_decide

import oracles


class TestRawError:
    def test_direct_difference(self):
        assert raw_error(0.35, 0.30) == pytest.approx(0.05)

    def test_idle_robot_gives_maximum_error(self):
        assert raw_error(0.1, 0.0) == 0.1

    def test_overspeed_clamps_to_zero(self):
        assert raw_error(0.2, 0.4) == 0.0

    def test_reversing_robot_saturates(self):
        assert raw_error(0.0, -0.3) == 0.1


class TestEmaUpdate:
    def test_single_step(self):
        f = ErrorFilter(ErrorFilterConfig(alpha=0.06))
        assert f.update(0.1, now=0.0) == pytest.approx(0.006, abs=1e-12)

    def test_matches_closed_form(self):
        f = ErrorFilter(ErrorFilterConfig(alpha=0.06))
        for n in range(1, 201):
            value = f.update(0.1, now=n * 0.1)
            assert abs(value - oracles.ema_closed_form(0.1, 0.06, n)) <= 1e-9

    def test_crossing_at_step_twenty(self):
        cfg = ThresholdSwitcherConfig(threshold=0.07)
        f = ErrorFilter(ErrorFilterConfig(alpha=0.06))
        fired_at = None
        for n in range(1, 40):
            value = f.update(0.1, now=n * 0.1)
            if fired_at is None and threshold_decide(value, cfg):
                fired_at = n
        assert fired_at == 20
        assert oracles.ema_closed_form(0.1, 0.06, 19) < 0.07
        assert oracles.ema_closed_form(0.1, 0.06, 20) > 0.07

    def test_zero_input_decays_monotonically(self):
        f = ErrorFilter(ErrorFilterConfig(alpha=0.06))
        f.update(0.1, 0.0)
        prev = f.e_filtered
        for n in range(1, 50):
            value = f.update(0.0, now=n * 0.1)
            assert value <= prev
            prev = value

    def test_halving_takes_twelve_steps(self):
        # ceil(ln 0.5 / ln 0.94) = 12
        assert math.ceil(math.log(0.5) / math.log(0.94)) == 12
        f = ErrorFilter(ErrorFilterConfig(alpha=0.06))
        for n in range(40):
            f.update(0.1, now=n * 0.1)
        level = f.e_filtered
        for k in range(1, 13):
            f.update(0.0, now=(40 + k) * 0.1)
        assert f.e_filtered <= level / 2
        assert level * 0.94 ** 11 > level / 2

    @given(st.lists(st.floats(min_value=-0.5, max_value=0.5), max_size=200))
    def test_bounded_for_any_input(self, inputs):
        f = ErrorFilter(ErrorFilterConfig(alpha=0.06))
        for n, e in enumerate(inputs):
            value = f.update(e, now=n * 0.1)
            assert 0.0 <= value <= 0.1


class TestLockout:
    def test_reset_sets_suppression_window(self):
        f = ErrorFilter(ErrorFilterConfig(alpha=0.06, lockout_seconds=2.0))
        f.update(0.1, now=9.9)
        f.reset_on_switch(now=10.0)
        assert f.e_filtered == 0.0
        assert f.suppressed_until == pytest.approx(12.0)

    def test_held_at_zero_during_suppression(self):
        f = ErrorFilter(ErrorFilterConfig(alpha=0.06, lockout_seconds=2.0))
        f.reset_on_switch(now=10.0)
        for t in (10.1, 10.5, 11.0, 11.9):
            assert f.update(0.1, now=t) == 0.0
            assert f.in_lockout(t)

    def test_first_update_after_suppression(self):
        f = ErrorFilter(ErrorFilterConfig(alpha=0.06, lockout_seconds=2.0))
        f.reset_on_switch(now=10.0)
        f.update(0.1, now=11.0)
        assert f.update(0.1, now=12.0) == pytest.approx(0.006, abs=1e-12)
        assert not f.in_lockout(12.0)


def test_alpha_validation():
    with pytest.raises(ValueError):
        ErrorFilterConfig(alpha=0.0)
    with pytest.raises(ValueError):
        ErrorFilterConfig(alpha=1.5)
