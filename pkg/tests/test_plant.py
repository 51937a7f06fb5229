import math

import pytest

from habsim import (DEFAULT_CALIBRATION, PlantConfig, canonical_config,
                    empirical_config, eval_poly, initial_state, measure,
                    plant_tick, resolve_config, set_throttle,
                    steady_state_temp, time_constant)
from habsim.errors import (InputOutOfRange, NonPositiveFactor,
                           NonPositiveTimestep)


def tss_by_hand(u: float) -> float:
    # canonical static map written out segment by segment
    if u <= 1.0:
        return 29.6 + 9.5 * u
    if u <= 2.0:
        return 29.6 + 9.5 + 8.0 * (u - 1.0)
    return 29.6 + 9.5 + 8.0 + 10.0 * (u - 2.0)


def test_steady_state_anchor_points():
    cfg = canonical_config()
    assert steady_state_temp(0.0, cfg) == pytest.approx(29.6)
    assert steady_state_temp(1.0, cfg) == pytest.approx(39.1)
    assert steady_state_temp(2.0, cfg) == pytest.approx(47.1)
    assert steady_state_temp(3.0, cfg) == pytest.approx(57.1)
    assert steady_state_temp(4.0, cfg) == pytest.approx(67.1)


def test_steady_state_matches_piecewise_form_on_grid():
    cfg = canonical_config()
    for i in range(81):
        u = i * 0.05
        assert steady_state_temp(u, cfg) == pytest.approx(tss_by_hand(u), abs=1e-12)


def test_time_constant_break_ownership():
    # drives held exactly at a break evolve with the lower region's tau
    cfg = canonical_config()
    assert time_constant(0.5, cfg) == 6.5
    assert time_constant(1.0, cfg) == 6.5
    assert time_constant(1.5, cfg) == 15.0
    assert time_constant(2.0, cfg) == 15.0
    assert time_constant(2.5, cfg) == 16.0
    assert time_constant(4.0, cfg) == 16.0


def test_inputs_outside_daq_range_rejected():
    cfg = canonical_config()
    state = initial_state(cfg)
    for u in (-0.1, 4.1):
        with pytest.raises(InputOutOfRange):
            steady_state_temp(u, cfg)
        with pytest.raises(InputOutOfRange):
            plant_tick(state, u, 0.1, cfg)


def test_tick_is_exact_zero_order_hold_update():
    cfg = canonical_config()
    state = initial_state(cfg)
    new = plant_tick(state, 0.5, 0.1, cfg)
    target = 29.6 + 9.5 * 0.5
    expected = target + (29.6 - target) * math.exp(-0.1 / 6.5)
    assert new.temp == pytest.approx(expected, rel=1e-14)
    assert new.t == pytest.approx(0.1)


def test_constant_input_matches_analytic_solution_everywhere():
    cfg = canonical_config()
    state = initial_state(cfg)
    u, ts, tau = 0.7, 0.1, 6.5
    target = tss_by_hand(u)
    for k in range(1, 801):
        state = plant_tick(state, u, ts, cfg)
        analytic = target + (29.6 - target) * math.exp(-k * ts / tau)
        assert abs(state.temp - analytic) / abs(analytic) < 1e-10


def test_tick_converges_to_steady_state():
    cfg = canonical_config()
    state = initial_state(cfg)
    for _ in range(1200):  # 120 s at u=1, about 18 time constants
        state = plant_tick(state, 1.0, 0.1, cfg)
    assert state.temp == pytest.approx(39.1, abs=1e-4)


def test_nonpositive_timestep_rejected():
    cfg = canonical_config()
    with pytest.raises(NonPositiveTimestep):
        plant_tick(initial_state(cfg), 1.0, 0.0, cfg)
    with pytest.raises(NonPositiveTimestep):
        plant_tick(initial_state(cfg), 1.0, -0.1, cfg)


def test_throttle_scales_the_rise_only():
    cfg = set_throttle(canonical_config(), 1.3)
    assert steady_state_temp(0.0, cfg) == pytest.approx(29.6)
    assert steady_state_temp(2.0, cfg) == pytest.approx(29.6 + 1.3 * 17.5)
    with pytest.raises(NonPositiveFactor):
        set_throttle(cfg, 0.0)
    with pytest.raises(NonPositiveFactor):
        set_throttle(cfg, -1.0)
    with pytest.raises(NonPositiveFactor):
        PlantConfig(throttle_factor=0.0)


def test_measure_round_trips_through_calibration():
    cfg = canonical_config()
    state = initial_state(cfg)
    for _ in range(50):
        state = plant_tick(state, 1.5, 0.1, cfg)
    volts, temp = measure(state, cfg, DEFAULT_CALIBRATION)
    assert temp == pytest.approx(state.temp, abs=1e-9)
    assert eval_poly(DEFAULT_CALIBRATION, volts) == temp


def test_sensor_delay_returns_older_samples():
    cfg = PlantConfig(sensor_delay_s=0.3)
    state = initial_state(cfg)
    temps = [state.temp]
    for _ in range(10):
        state = plant_tick(state, 2.0, 0.1, cfg)
        temps.append(state.temp)
    _, seen = measure(state, cfg, DEFAULT_CALIBRATION)
    assert seen == pytest.approx(temps[10 - 3], abs=1e-9)


def test_sensor_delay_clamps_to_oldest_sample_at_start():
    cfg = PlantConfig(sensor_delay_s=0.5)
    state = initial_state(cfg, temp=31.0)
    state = plant_tick(state, 2.0, 0.1, cfg)
    _, seen = measure(state, cfg, DEFAULT_CALIBRATION)
    assert seen == pytest.approx(31.0, abs=1e-9)


def test_delay_buffer_stays_small():
    cfg = PlantConfig(sensor_delay_s=0.5)
    state = initial_state(cfg)
    for _ in range(500):
        state = plant_tick(state, 1.0, 0.1, cfg)
    assert len(state.buffer) <= 8


def test_noise_is_seeded_and_reproducible():
    cfg = PlantConfig(noise_sigma=0.05, noise_seed=3)

    def draw_series(config):
        state = initial_state(config)
        out = []
        for _ in range(20):
            state = plant_tick(state, 1.0, 0.1, config)
            out.append(measure(state, config, DEFAULT_CALIBRATION)[1])
        return out

    assert draw_series(cfg) == draw_series(cfg)
    other = PlantConfig(noise_sigma=0.05, noise_seed=4)
    assert draw_series(cfg) != draw_series(other)


def test_zero_noise_leaves_measurement_clean():
    cfg = canonical_config()
    state = initial_state(cfg)
    for _ in range(5):
        state = plant_tick(state, 1.0, 0.1, cfg)
    a = measure(state, cfg, DEFAULT_CALIBRATION)
    b = measure(state, cfg, DEFAULT_CALIBRATION)
    assert a == b  # no rng consumption when sigma is 0


def test_empirical_preset_anchor_points():
    cfg = empirical_config()
    assert steady_state_temp(1.0, cfg) == pytest.approx(39.5)
    assert steady_state_temp(2.0, cfg) == pytest.approx(48.7)
    assert steady_state_temp(3.0, cfg) == pytest.approx(59.0)


def test_config_doc_round_trip():
    cfg = PlantConfig(sensor_delay_s=0.2, noise_sigma=0.01, noise_seed=9,
                      throttle_factor=1.1)
    doc = cfg.to_doc()
    assert set(doc) == {"ambient_temp", "region_gains", "region_taus",
                        "region_breaks", "amp_gain", "sensor_delay_s",
                        "throttle_factor", "noise_sigma", "noise_seed"}
    assert PlantConfig.from_doc(doc) == cfg


def test_config_doc_rejects_unknown_keys():
    with pytest.raises(ValueError, match="unknown plant config"):
        PlantConfig.from_doc({"ambient_temp": 30.0, "fan_rpm": 2000})


def test_config_validation():
    with pytest.raises(ValueError):
        PlantConfig(region_taus=(6.5, -1.0, 16.0))
    with pytest.raises(ValueError):
        PlantConfig(region_breaks=(2.0, 1.0))
    with pytest.raises(ValueError):
        PlantConfig(region_breaks=(0.0, 4.0))
    with pytest.raises(ValueError):
        PlantConfig(noise_sigma=-0.1)
    with pytest.raises(ValueError):
        PlantConfig(sensor_delay_s=-0.5)


def test_resolve_config_accepts_name_doc_or_config():
    assert resolve_config("canonical") == canonical_config()
    assert resolve_config("empirical") == empirical_config()
    assert resolve_config({"noise_sigma": 0.02}) == PlantConfig(noise_sigma=0.02)
    cfg = PlantConfig(ambient_temp=25.0)
    assert resolve_config(cfg) is cfg
    with pytest.raises(ValueError, match="unknown plant preset"):
        resolve_config("windy")
    with pytest.raises(TypeError):
        resolve_config(42)
