"""Closed-loop scenario engine and open-loop step experiments.

Each tick runs in a fixed order: fire due schedule entries, sample the
sensor, form the error, let the controller act, log the row, then advance
the plant. The logged region is the one the controller's gains came from
on that tick.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

from .calibration import CalibrationPoly, DEFAULT_CALIBRATION
from .control import (SwitchedController, controller_from_doc,
                      controller_to_doc, default_controller, region_label,
                      select_region, switched_tick)
from .errors import HabsimError, NonPositiveFactor, NonPositiveTimestep
from .metrics import StepMetrics, compute_step_metrics
from .plant import (PlantConfig, initial_state, measure, plant_tick,
                    resolve_config, set_throttle, steady_state_temp,
                    time_constant)
from .sysid import StepRecord

_SCHEDULE_EPS = 1e-9

CSV_HEADER = "t,setpoint,T_internal,T_measured,V_measured,e,u_daq,u_plant,region"


@dataclass(frozen=True)
class Scenario:
    """A reproducible closed-loop run.

    setpoints and throttle are (time, value) schedules, ascending in time;
    entries take effect at the first tick at or after their time.
    plant_preset is a preset name, a plant config doc, or a PlantConfig.
    seed overrides the plant's noise seed when given. controller defaults
    to the stock gain schedule at the scenario's ts.
    """

    duration: float
    ts: float = 0.1
    setpoints: tuple[tuple[float, float], ...] = ()
    throttle: tuple[tuple[float, float], ...] = ()
    plant_preset: "str | Mapping | PlantConfig" = "canonical"
    controller: SwitchedController | None = None
    initial_temp: float | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.duration <= 0:
            raise ValueError(f"duration must be positive, got {self.duration}")
        if self.ts <= 0:
            raise NonPositiveTimestep(f"ts must be positive, got {self.ts}")
        for name, sched in (("setpoints", self.setpoints), ("throttle", self.throttle)):
            times = [entry[0] for entry in sched]
            if any(tm < 0 for tm in times):
                raise ValueError(f"{name} entries must have non-negative times")
            if any(b <= a for a, b in zip(times, times[1:])):
                raise ValueError(f"{name} entries must be strictly ascending in time")
        for _, factor in self.throttle:
            if factor <= 0:
                raise NonPositiveFactor(
                    f"scheduled throttle factor must be positive, got {factor}")


def scenario_to_doc(scenario: Scenario) -> dict:
    preset = scenario.plant_preset
    if isinstance(preset, PlantConfig):
        preset = preset.to_doc()
    elif isinstance(preset, Mapping):
        preset = dict(preset)
    return {
        "duration": scenario.duration,
        "ts": scenario.ts,
        "setpoints": [list(e) for e in scenario.setpoints],
        "throttle": [list(e) for e in scenario.throttle],
        "plant_preset": preset,
        "controller": (None if scenario.controller is None
                       else controller_to_doc(scenario.controller)),
        "initial_temp": scenario.initial_temp,
        "seed": scenario.seed,
    }


def scenario_from_doc(doc: Mapping) -> Scenario:
    allowed = {"duration", "ts", "setpoints", "throttle", "plant_preset",
               "controller", "initial_temp", "seed"}
    unknown = set(doc) - allowed
    if unknown:
        raise ValueError(f"unknown scenario keys: {sorted(unknown)}")
    if "duration" not in doc:
        raise ValueError("scenario needs a duration")
    preset = doc.get("plant_preset", "canonical")
    if isinstance(preset, Mapping):
        preset = PlantConfig.from_doc(preset)
    controller_doc = doc.get("controller")
    controller = None if controller_doc is None else controller_from_doc(controller_doc)
    seed = doc.get("seed")
    return Scenario(
        duration=float(doc["duration"]),
        ts=float(doc.get("ts", 0.1)),
        setpoints=tuple((float(t), float(v)) for t, v in doc.get("setpoints", ())),
        throttle=tuple((float(t), float(v)) for t, v in doc.get("throttle", ())),
        plant_preset=preset,
        controller=controller,
        initial_temp=(None if doc.get("initial_temp") is None
                      else float(doc["initial_temp"])),
        seed=None if seed is None else int(seed),
    )


@dataclass(frozen=True)
class TickRow:
    """One logged tick. The CSV columns are the first nine fields; the
    rest (region_index, throttle, integrator) are in-memory extras."""

    t: float
    setpoint: float
    temp_internal: float
    temp_measured: float
    volt_measured: float
    error: float
    u_daq: float
    u_plant: float
    region: str
    region_index: int
    throttle: float
    integrator: float

    def csv_line(self) -> str:
        return ",".join((
            repr(self.t), repr(self.setpoint), repr(self.temp_internal),
            repr(self.temp_measured), repr(self.volt_measured),
            repr(self.error), repr(self.u_daq), repr(self.u_plant),
            self.region))


@dataclass(frozen=True)
class StepSummary:
    """Metrics for one setpoint-step segment of a run. metrics is None
    when they could not be computed; note says why."""

    t_start: float
    baseline: float
    target: float
    metrics: StepMetrics | None = None
    note: str | None = None


@dataclass(frozen=True)
class RunSummary:
    switch_count: int
    steps: tuple[StepSummary, ...]


@dataclass
class SimLog:
    rows: list[TickRow] = field(default_factory=list)
    summary: RunSummary | None = None

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        lines.extend(row.csv_line() for row in self.rows)
        return "\n".join(lines) + "\n"


class ClosedLoopSim:
    """Tick-at-a-time closed loop over one scenario.

    Mutable runtime used by both the batch runner and the live service.
    set_setpoint / set_throttle_factor apply immediately and hold until
    the next scheduled entry fires; set_controller swaps the gain table
    while keeping the integrator and u_prev (bumpless).
    """

    def __init__(self, scenario: Scenario, calib: CalibrationPoly | None = None):
        self.scenario = scenario
        self.calib = calib if calib is not None else DEFAULT_CALIBRATION
        self.reset()

    def reset(self) -> None:
        sc = self.scenario
        config = resolve_config(sc.plant_preset)
        if sc.seed is not None:
            config = replace(config, noise_seed=sc.seed)
        self.config = config
        controller = sc.controller or default_controller(sc.ts)
        if abs(controller.ts - sc.ts) > 1e-12:
            raise ValueError(
                f"controller ts {controller.ts} does not match scenario ts {sc.ts}")
        self.controller = controller
        temp0 = sc.initial_temp if sc.initial_temp is not None else config.ambient_temp
        self.state = initial_state(config, temp0)
        self.tick_index = 0
        self.setpoint = temp0
        self.switch_count = 0
        self._sp_next = 0
        self._th_next = 0
        self._last_region: int | None = None

    @property
    def t(self) -> float:
        return self.tick_index * self.scenario.ts

    def set_setpoint(self, value: float) -> None:
        self.setpoint = float(value)

    def set_throttle_factor(self, factor: float) -> None:
        self.config = set_throttle(self.config, factor)

    def set_controller(self, doc: Mapping) -> None:
        controller = controller_from_doc(doc)
        if abs(controller.ts - self.scenario.ts) > 1e-12:
            raise ValueError(
                f"controller ts {controller.ts} does not match scenario ts "
                f"{self.scenario.ts}")
        self.controller = replace(controller,
                                  integrator=self.controller.integrator,
                                  u_prev=self.controller.u_prev)

    def _fire_schedules(self, t: float) -> None:
        sp = self.scenario.setpoints
        while self._sp_next < len(sp) and sp[self._sp_next][0] <= t + _SCHEDULE_EPS:
            self.setpoint = sp[self._sp_next][1]
            self._sp_next += 1
        th = self.scenario.throttle
        while self._th_next < len(th) and th[self._th_next][0] <= t + _SCHEDULE_EPS:
            self.config = set_throttle(self.config, th[self._th_next][1])
            self._th_next += 1

    def step(self) -> TickRow:
        ts = self.scenario.ts
        t = self.tick_index * ts
        self._fire_schedules(t)
        volts, temp_meas = measure(self.state, self.config, self.calib)
        error = self.setpoint - temp_meas
        region_idx = select_region(self.controller.u_prev, self.controller.regions)
        if self._last_region is not None and region_idx != self._last_region:
            self.switch_count += 1
        self._last_region = region_idx
        u, self.controller = switched_tick(self.controller, error)
        row = TickRow(
            t=t, setpoint=self.setpoint, temp_internal=self.state.temp,
            temp_measured=temp_meas, volt_measured=volts, error=error,
            u_daq=u, u_plant=self.config.amp_gain * u,
            region=region_label(region_idx), region_index=region_idx,
            throttle=self.config.throttle_factor,
            integrator=self.controller.integrator)
        self.state = plant_tick(self.state, u, ts, self.config)
        self.tick_index += 1
        return row


def _summarize(scenario: Scenario, rows: Sequence[TickRow],
               switch_count: int) -> RunSummary:
    """Per-setpoint-step metrics over the measured temperature."""
    temp0 = rows[0].temp_internal
    events: list[tuple[float, float]] = []
    effective0 = temp0
    for tm, value in scenario.setpoints:
        if tm <= _SCHEDULE_EPS:
            effective0 = value
        else:
            events.append((tm, value))
    targets = [(0.0, effective0)] + events
    boundaries = [tm for tm, _ in targets[1:]] + [math.inf]
    steps: list[StepSummary] = []
    baseline = temp0
    for (t_start, target), t_end in zip(targets, boundaries):
        segment = [r for r in rows if t_start - _SCHEDULE_EPS <= r.t < t_end - _SCHEDULE_EPS]
        if abs(target - baseline) < 1e-12:
            baseline = target
            continue
        summary = StepSummary(t_start=t_start, baseline=baseline, target=target)
        if len(segment) >= 2:
            times = [r.t - t_start for r in segment]
            values = [r.temp_measured for r in segment]
            try:
                summary = replace(summary, metrics=compute_step_metrics(
                    times, values, baseline, target))
            except HabsimError as exc:
                summary = replace(summary, note=str(exc))
        else:
            summary = replace(summary, note="segment too short")
        steps.append(summary)
        baseline = target
    return RunSummary(switch_count=switch_count, steps=tuple(steps))


def run_closed_loop(scenario: Scenario,
                    calib: CalibrationPoly | None = None) -> SimLog:
    """Run a scenario to completion and summarize it."""
    sim = ClosedLoopSim(scenario, calib)
    n_ticks = round(scenario.duration / scenario.ts)
    rows = [sim.step() for _ in range(n_ticks)]
    return SimLog(rows=rows, summary=_summarize(scenario, rows, sim.switch_count))


def run_open_loop_step(u0: float, u1: float, duration: float, ts: float = 0.1,
                       plant_preset: "str | Mapping | PlantConfig" = "canonical",
                       calib: CalibrationPoly | None = None) -> StepRecord:
    """Record an open-loop step experiment u0 -> u1.

    The plant first settles at u0 (ten time constants, unrecorded), then
    5 s of pre-step data are recorded, then the drive steps to u1. The
    post-step stretch is max(duration, ten time constants at u1) so the
    record always settles well enough to identify, even when the asked-for
    duration is short for the region's dynamics. Temperatures are the
    sensor's view (through the calibration).
    """
    if duration <= 0:
        raise ValueError(f"duration must be positive, got {duration}")
    if ts <= 0:
        raise NonPositiveTimestep(f"ts must be positive, got {ts}")
    config = resolve_config(plant_preset)
    calib = calib if calib is not None else DEFAULT_CALIBRATION
    steady_state_temp(u0, config)  # range-check both levels up front
    steady_state_temp(u1, config)
    pre_s = 5.0
    post_s = max(duration, 10.0 * time_constant(u1, config))
    settle_ticks = round(10.0 * time_constant(u0, config) / ts)
    pre_ticks = round(pre_s / ts)
    post_ticks = round(post_s / ts)

    state = initial_state(config)
    for _ in range(settle_ticks):
        state = plant_tick(state, u0, ts, config)
    samples: list[float] = []
    for k in range(pre_ticks + post_ticks + 1):
        _, temp_meas = measure(state, config, calib)
        samples.append(temp_meas)
        if k < pre_ticks + post_ticks:
            u = u0 if k < pre_ticks else u1
            state = plant_tick(state, u, ts, config)
    return StepRecord(ts=ts, t_step=pre_ticks * ts, u0=u0, u1=u1,
                      samples=tuple(samples))
