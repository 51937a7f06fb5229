import math
from dataclasses import replace

import pytest

from habsim import (ControllerRegion, PIGains, SwitchedController,
                    controller_from_doc, controller_to_doc,
                    default_controller, pi_tick, region_label, select_region,
                    switched_tick)
from habsim.control import default_regions
from habsim.errors import NegativeInput, NonPositiveTimestep


def test_region_boundaries_are_right_open():
    regions = default_regions()
    assert select_region(0.0, regions) == 0
    assert select_region(1.0 - 1e-9, regions) == 0
    assert select_region(1.0, regions) == 1
    assert select_region(2.0 - 1e-9, regions) == 1
    assert select_region(2.0, regions) == 2
    assert select_region(3.7, regions) == 2


def test_select_region_rejects_negative_input():
    with pytest.raises(NegativeInput):
        select_region(-0.001, default_regions())


def test_pi_tick_hand_values():
    u, integ = pi_tick(PIGains(kp=1.3, ki=0.11), 0.0, 2.0, 0.1)
    assert integ == pytest.approx(0.022, abs=1e-12)
    assert u == pytest.approx(2.622, abs=1e-12)
    u2, integ2 = pi_tick(PIGains(kp=1.5, ki=0.13), integ, -0.5, 0.1)
    assert integ2 == pytest.approx(0.022 - 0.0065, abs=1e-12)
    assert u2 == pytest.approx(-0.75 + 0.0155, abs=1e-12)


def test_pi_tick_rejects_nonpositive_timestep():
    with pytest.raises(NonPositiveTimestep):
        pi_tick(PIGains(1.0, 0.1), 0.0, 1.0, 0.0)


def test_switched_tick_uses_previous_output_for_gains():
    ctrl = default_controller(0.1)
    u1, ctrl = switched_tick(ctrl, 3.0)  # u_prev=0 picks region I gains
    assert u1 == pytest.approx(1.3 * 3.0 + 0.11 * 0.1 * 3.0, abs=1e-12)
    assert ctrl.u_prev == u1
    # u1 = 3.933 lands in region III, so the next tick uses its gains
    u2, ctrl = switched_tick(ctrl, 0.1)
    expected_integ = 0.033 + 0.12 * 0.1 * 0.1
    assert ctrl.integrator == pytest.approx(expected_integ, abs=1e-12)
    assert u2 == pytest.approx(1.8 * 0.1 + expected_integ, abs=1e-12)


def test_integrator_is_shared_across_switches():
    # same integrator object flows through whichever region is active
    ctrl = default_controller(0.1)
    _, ctrl = switched_tick(ctrl, 3.0)
    carried = ctrl.integrator
    _, after = switched_tick(ctrl, 0.0)  # different region, zero error
    assert after.integrator == carried


def test_output_saturates_high_and_low():
    ctrl = default_controller(0.1)
    u_hi, _ = switched_tick(ctrl, 10.0)
    assert u_hi == 4.0
    u_lo, _ = switched_tick(ctrl, -10.0)
    assert u_lo == 0.0


def test_anti_windup_freezes_integrator_while_pushing_deeper():
    ctrl = default_controller(0.1)
    _, after = switched_tick(ctrl, 10.0)  # clamped high, error positive
    assert after.integrator == 0.0
    _, after = switched_tick(ctrl, -10.0)  # clamped low, error negative
    assert after.integrator == 0.0


def test_anti_windup_releases_when_error_reverses():
    ctrl = replace(default_controller(0.1), integrator=5.0, u_prev=4.0)
    _, after = switched_tick(ctrl, -0.5)
    # output still clamps high, but the error now pulls back, so the
    # integrator update is kept
    assert after.integrator == pytest.approx(5.0 - 0.12 * 0.1 * 0.5, abs=1e-12)


def test_windup_accumulates_when_disabled():
    ctrl = replace(default_controller(0.1), anti_windup=False)
    _, after = switched_tick(ctrl, 10.0)
    assert after.integrator == pytest.approx(0.11 * 0.1 * 10.0, abs=1e-12)


def test_unclamped_output_conserves_pi_form():
    ctrl = replace(default_controller(0.1), integrator=0.8, u_prev=1.4)
    error = 0.6
    u, after = switched_tick(ctrl, error)
    # region II gains apply; no clamping for this state
    assert u == pytest.approx(1.5 * error + after.integrator, abs=1e-12)
    assert after.integrator == pytest.approx(0.8 + 0.13 * 0.1 * error, abs=1e-12)


def test_switch_jump_is_gain_difference_times_error():
    # two controllers differing only in active region, same integrator and
    # error: the output gap is exactly the gain-pair difference acting on e
    error = 0.7
    low = replace(default_controller(0.1), integrator=0.5, u_prev=1.0 - 1e-9)
    high = replace(default_controller(0.1), integrator=0.5, u_prev=1.0)
    u_low, _ = switched_tick(low, error)
    u_high, _ = switched_tick(high, error)
    expected = (1.3 - 1.5) * error + (0.11 - 0.13) * 0.1 * error
    assert u_low - u_high == pytest.approx(expected, abs=1e-12)


def test_controller_doc_round_trip():
    ctrl = default_controller(0.1)
    doc = controller_to_doc(ctrl)
    assert doc["regions"][2]["u_high"] is None
    assert doc["anti_windup"] is True
    assert controller_from_doc(doc) == ctrl


def test_controller_doc_anti_windup_defaults_on():
    doc = controller_to_doc(default_controller(0.1))
    del doc["anti_windup"]
    assert controller_from_doc(doc).anti_windup is True


def test_controller_doc_rejects_unknown_keys():
    doc = controller_to_doc(default_controller(0.1))
    doc["derivative_gain"] = 0.2
    with pytest.raises(ValueError, match="unknown controller"):
        controller_from_doc(doc)


def test_region_table_must_tile_from_zero_to_infinity():
    gains = PIGains(1.0, 0.1)
    with pytest.raises(ValueError, match="first region"):
        SwitchedController(regions=(
            ControllerRegion(0.5, math.inf, gains),), ts=0.1)
    with pytest.raises(ValueError, match="tile contiguously"):
        SwitchedController(regions=(
            ControllerRegion(0.0, 1.0, gains),
            ControllerRegion(1.5, math.inf, gains)), ts=0.1)
    with pytest.raises(ValueError, match="infinity"):
        SwitchedController(regions=(
            ControllerRegion(0.0, 4.0, gains),), ts=0.1)
    with pytest.raises(NonPositiveTimestep):
        SwitchedController(regions=default_regions(), ts=0.0)


def test_region_labels():
    assert [region_label(i) for i in range(4)] == ["I", "II", "III", "IV"]
    assert region_label(12) == "13"
