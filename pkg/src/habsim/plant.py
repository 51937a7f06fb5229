"""Piecewise-linear model of the hot air blower plant.

The heater drive is a DAQ voltage u in 0..4 V, amplified on the rig to
0..13 V. Steady-state outlet temperature is piecewise linear in u with
three segments, and each segment has its own first-order time constant.
The sensor sees the outlet air after an optional transport delay and
through the thermistor calibration curve, optionally with Gaussian noise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping

import numpy as np

from .calibration import CalibrationPoly, eval_poly, invert_poly
from .errors import InputOutOfRange, NonPositiveFactor, NonPositiveTimestep

DAQ_RANGE = (0.0, 4.0)


@dataclass(frozen=True)
class PlantConfig:
    """Static plant parameters.

    region_gains are steady-state slopes in degC per DAQ volt, one per
    segment; region_breaks are the two drive levels where the slope
    changes. amp_gain only scales the logged plant-side voltage, the
    dynamics are written in terms of the DAQ voltage.
    """

    ambient_temp: float = 29.6
    region_gains: tuple[float, float, float] = (9.5, 8.0, 10.0)
    region_taus: tuple[float, float, float] = (6.5, 15.0, 16.0)
    region_breaks: tuple[float, float] = (1.0, 2.0)
    amp_gain: float = 3.25
    sensor_delay_s: float = 0.0
    throttle_factor: float = 1.0
    noise_sigma: float = 0.0
    noise_seed: int = 0

    def __post_init__(self):
        if len(self.region_gains) != 3 or len(self.region_taus) != 3:
            raise ValueError("exactly three regions (gains and taus)")
        if len(self.region_breaks) != 2:
            raise ValueError("exactly two region breaks")
        b1, b2 = self.region_breaks
        if not (DAQ_RANGE[0] < b1 < b2 < DAQ_RANGE[1]):
            raise ValueError(
                f"breaks must be ascending inside {DAQ_RANGE}, got {self.region_breaks}")
        if any(tau <= 0 for tau in self.region_taus):
            raise ValueError(f"time constants must be positive, got {self.region_taus}")
        if self.throttle_factor <= 0:
            raise NonPositiveFactor(
                f"throttle factor must be positive, got {self.throttle_factor}")
        if self.noise_sigma < 0:
            raise ValueError("noise sigma must be non-negative")
        if self.sensor_delay_s < 0:
            raise ValueError("sensor delay must be non-negative")

    def to_doc(self) -> dict:
        return {
            "ambient_temp": self.ambient_temp,
            "region_gains": list(self.region_gains),
            "region_taus": list(self.region_taus),
            "region_breaks": list(self.region_breaks),
            "amp_gain": self.amp_gain,
            "sensor_delay_s": self.sensor_delay_s,
            "throttle_factor": self.throttle_factor,
            "noise_sigma": self.noise_sigma,
            "noise_seed": self.noise_seed,
        }

    @classmethod
    def from_doc(cls, doc: Mapping) -> "PlantConfig":
        allowed = {
            "ambient_temp", "region_gains", "region_taus", "region_breaks",
            "amp_gain", "sensor_delay_s", "throttle_factor", "noise_sigma",
            "noise_seed",
        }
        unknown = set(doc) - allowed
        if unknown:
            raise ValueError(f"unknown plant config keys: {sorted(unknown)}")
        kwargs = dict(doc)
        for key in ("region_gains", "region_taus", "region_breaks"):
            if key in kwargs:
                kwargs[key] = tuple(float(x) for x in kwargs[key])
        return cls(**kwargs)


def canonical_config() -> PlantConfig:
    """Nominal plant: the published per-region gains and time constants."""
    return PlantConfig()


def empirical_config() -> PlantConfig:
    """Gains re-read from bench step responses (u=0..3 settle at
    29.6, 39.5, 48.7, 59.0 degC); time constants as nominal."""
    return PlantConfig(region_gains=(9.9, 9.2, 10.3))


PRESETS = {"canonical": canonical_config, "empirical": empirical_config}


def resolve_config(spec: "str | Mapping | PlantConfig") -> PlantConfig:
    """Accept a preset name, a plant config doc, or a ready config."""
    if isinstance(spec, PlantConfig):
        return spec
    if isinstance(spec, str):
        try:
            return PRESETS[spec]()
        except KeyError:
            raise ValueError(
                f"unknown plant preset {spec!r}, expected one of {sorted(PRESETS)}")
    if isinstance(spec, Mapping):
        return PlantConfig.from_doc(spec)
    raise TypeError(f"cannot build a plant config from {type(spec).__name__}")


def _check_input(u: float) -> None:
    lo, hi = DAQ_RANGE
    if not (lo <= u <= hi):
        raise InputOutOfRange(f"drive input {u} V outside DAQ range {lo}..{hi} V")


def _segment_index(u: float, config: PlantConfig) -> int:
    # Break inputs belong to the lower segment: a drive held exactly at a
    # break must evolve with the time constant of the region it tops out.
    b1, b2 = config.region_breaks
    if u <= b1:
        return 0
    if u <= b2:
        return 1
    return 2


def time_constant(u: float, config: PlantConfig) -> float:
    """First-order time constant governing the response at drive u."""
    _check_input(u)
    return config.region_taus[_segment_index(u, config)]


def steady_state_temp(u: float, config: PlantConfig) -> float:
    """Settled outlet temperature for a constant drive u."""
    _check_input(u)
    g1, g2, g3 = config.region_gains
    b1, b2 = config.region_breaks
    rise = (g1 * min(u, b1)
            + g2 * min(max(u - b1, 0.0), b2 - b1)
            + g3 * max(u - b2, 0.0))
    return config.ambient_temp + config.throttle_factor * rise


def set_throttle(config: PlantConfig, factor: float) -> PlantConfig:
    """New config with the blower throttle changed (must be positive)."""
    if factor <= 0:
        raise NonPositiveFactor(f"throttle factor must be positive, got {factor}")
    return replace(config, throttle_factor=factor)


@dataclass(frozen=True)
class PlantState:
    """Plant state between ticks.

    buffer holds (time, temperature) pairs covering the sensor delay
    window, newest last. rng is carried by reference and advances whenever
    measure() draws noise, so runs with the same seed replay exactly.
    """

    temp: float
    t: float
    buffer: tuple[tuple[float, float], ...]
    rng: np.random.Generator = field(repr=False)


def initial_state(config: PlantConfig, temp: float | None = None) -> PlantState:
    t0 = config.ambient_temp if temp is None else temp
    return PlantState(
        temp=t0, t=0.0, buffer=((0.0, t0),),
        rng=np.random.default_rng(config.noise_seed))


def plant_tick(state: PlantState, u: float, ts: float, config: PlantConfig) -> PlantState:
    """Advance the plant one sample period under a held drive u.

    Exact zero-order-hold update of the first-order response toward the
    steady state of the active segment.
    """
    if ts <= 0:
        raise NonPositiveTimestep(f"timestep must be positive, got {ts}")
    _check_input(u)
    target = steady_state_temp(u, config)
    tau = config.region_taus[_segment_index(u, config)]
    temp = target + (state.temp - target) * math.exp(-ts / tau)
    t = state.t + ts
    buffer = state.buffer + ((t, temp),)
    # Drop entries that can no longer be the delayed-lookup candidate.
    cutoff = t - config.sensor_delay_s + 1e-9
    start = 0
    while start + 1 < len(buffer) and buffer[start + 1][0] <= cutoff:
        start += 1
    return PlantState(temp=temp, t=t, buffer=buffer[start:], rng=state.rng)


def measure(state: PlantState, config: PlantConfig,
            calib: CalibrationPoly) -> tuple[float, float]:
    """Sensor reading as (voltage, temperature).

    Picks the newest buffered temperature at least sensor_delay_s old,
    adds measurement noise if configured, converts to bridge volts, then
    back through the calibration the way a logger would report it.
    """
    target = state.t - config.sensor_delay_s + 1e-9
    temp = state.buffer[0][1]
    for entry_t, entry_temp in state.buffer:
        if entry_t <= target:
            temp = entry_temp
        else:
            break
    if config.noise_sigma > 0:
        temp += state.rng.normal(0.0, config.noise_sigma)
    volts = invert_poly(calib, temp)
    return volts, eval_poly(calib, volts)
