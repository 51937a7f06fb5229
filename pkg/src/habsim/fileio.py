"""File formats: calibration CSV/JSON, step-record CSV, scenario JSON,
run-log CSV, regional model and controller JSON."""
from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Sequence

from .calibration import CalibrationPoint, CalibrationPoly
from .control import SwitchedController, controller_from_doc, controller_to_doc
from .simulation import Scenario, SimLog, scenario_from_doc, scenario_to_doc
from .sysid import RegionalModel, StepRecord

_POINTS_HEADER = "T,V"
_RECORD_HEADER = "t,u,T"
_JITTER = 1e-9


def read_calibration_points(path: "str | Path") -> list[CalibrationPoint]:
    """Calibration CSV: header exactly 'T,V', one temperature,voltage pair
    per line."""
    lines = _read_lines(path)
    if not lines or lines[0] != _POINTS_HEADER:
        raise ValueError(f"{path}: expected header '{_POINTS_HEADER}'")
    points = []
    for i, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 2:
            raise ValueError(f"{path}:{i}: expected 'T,V', got {line!r}")
        points.append(CalibrationPoint(temperature_c=float(parts[0]),
                                       voltage_v=float(parts[1])))
    return points


def write_calibration_points(path: "str | Path",
                             points: Sequence[CalibrationPoint]) -> None:
    lines = [_POINTS_HEADER]
    lines.extend(f"{repr(p.temperature_c)},{repr(p.voltage_v)}" for p in points)
    Path(path).write_text("\n".join(lines) + "\n")


def write_poly(path: "str | Path", poly: CalibrationPoly) -> None:
    Path(path).write_text(json.dumps(poly.to_doc(), indent=2) + "\n")


def read_poly(path: "str | Path") -> CalibrationPoly:
    return CalibrationPoly.from_doc(json.loads(Path(path).read_text()))


def write_step_record(path: "str | Path", record: StepRecord) -> None:
    """Step record CSV: header 't,u,T'; u is the drive applied from each
    instant on (u1 from t_step onward)."""
    lines = [_RECORD_HEADER]
    for i, temp in enumerate(record.samples):
        t = i * record.ts
        u = record.u0 if t < record.t_step - _JITTER else record.u1
        lines.append(f"{repr(t)},{repr(u)},{repr(temp)}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_step_record(path: "str | Path") -> StepRecord:
    """Parse a step-record CSV, inferring the sample period and the step
    instant. The time column must be uniform (jitter below 1e-9) and the
    input column must change at most once."""
    lines = _read_lines(path)
    if not lines or lines[0] != _RECORD_HEADER:
        raise ValueError(f"{path}: expected header '{_RECORD_HEADER}'")
    times, drives, temps = [], [], []
    for i, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 3:
            raise ValueError(f"{path}:{i}: expected 't,u,T', got {line!r}")
        times.append(float(parts[0]))
        drives.append(float(parts[1]))
        temps.append(float(parts[2]))
    if len(times) < 2:
        raise ValueError(f"{path}: need at least two samples")
    ts = times[1] - times[0]
    if ts <= 0:
        raise ValueError(f"{path}: times must be ascending")
    for a, b in zip(times, times[1:]):
        if abs((b - a) - ts) > _JITTER:
            raise ValueError(
                f"{path}: non-uniform sampling ({b - a} vs {ts})")
    changes = [i for i in range(1, len(drives)) if drives[i] != drives[i - 1]]
    if len(changes) > 1:
        raise ValueError(f"{path}: input changes more than once, not a single step")
    if changes:
        t_step = times[changes[0]] - times[0]
        u0, u1 = drives[0], drives[changes[0]]
    else:
        t_step = 0.0
        u0 = u1 = drives[0]
    return StepRecord(ts=ts, t_step=t_step, u0=u0, u1=u1, samples=tuple(temps))


def write_scenario(path: "str | Path", scenario: Scenario) -> None:
    Path(path).write_text(json.dumps(scenario_to_doc(scenario), indent=2) + "\n")


def read_scenario(path: "str | Path") -> Scenario:
    return scenario_from_doc(json.loads(Path(path).read_text()))


def write_simlog(path: "str | Path", log: SimLog) -> None:
    Path(path).write_text(log.to_csv())


def write_regional_model(path: "str | Path", model: RegionalModel) -> None:
    Path(path).write_text(json.dumps(model.to_doc(), indent=2) + "\n")


def read_regional_model(path: "str | Path") -> RegionalModel:
    return RegionalModel.from_doc(json.loads(Path(path).read_text()))


def write_controller(path: "str | Path", controller: SwitchedController) -> None:
    Path(path).write_text(json.dumps(controller_to_doc(controller), indent=2) + "\n")


def read_controller(path: "str | Path") -> SwitchedController:
    return controller_from_doc(json.loads(Path(path).read_text()))


def default_out_dir() -> Path:
    """Output directory for artifacts when no explicit path is given;
    taken from HABS_LOG_DIR, falling back to the working directory."""
    return Path(os.environ.get("HABS_LOG_DIR", "."))


def _read_lines(path: "str | Path") -> list[str]:
    text = Path(path).read_text()
    return [line.strip() for line in text.splitlines() if line.strip()]
