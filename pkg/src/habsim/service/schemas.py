"""Request/response models for the REST API and the live wire protocol."""
from __future__ import annotations

from typing import Annotated, Any, Literal, Optional, Union

from pydantic import BaseModel, Field, TypeAdapter


class PolyModel(BaseModel):
    c3: float
    c2: float
    c1: float
    c0: float


class CalibrationPointModel(BaseModel):
    temperature_c: float
    voltage_v: float


class FitRequest(BaseModel):
    points: list[CalibrationPointModel]


class FitResponse(BaseModel):
    poly: PolyModel
    residuals: list[float]
    rms_residual: float


class EvalRequest(BaseModel):
    poly: PolyModel
    voltage_v: float


class EvalResponse(BaseModel):
    temperature_c: float


class InvertRequest(BaseModel):
    poly: PolyModel
    temperature_c: float


class InvertResponse(BaseModel):
    voltage_v: float


class StepRequest(BaseModel):
    u0: float
    u1: float
    duration_s: float = 60.0
    ts_s: float = 0.1
    plant_preset: Union[str, dict] = "canonical"


class StepRecordModel(BaseModel):
    ts_s: float
    t_step_s: float
    u0: float
    u1: float
    samples: list[float]


class IdentifyRequest(BaseModel):
    records: list[StepRecordModel]


class RegionModelOut(BaseModel):
    u_low: float
    u_high: Optional[float]  # null = unbounded above
    gain: float
    tau: float


class IdentifyResponse(BaseModel):
    regions: list[RegionModelOut]


class SimulateRequest(BaseModel):
    scenario: dict


class StepSummaryModel(BaseModel):
    t_start: float
    baseline: float
    target: float
    rise_time: Optional[float] = None
    overshoot_pct: Optional[float] = None
    settling_time: Optional[float] = None
    note: Optional[str] = None


class RunSummaryModel(BaseModel):
    switch_count: int
    steps: list[StepSummaryModel]


class SimulateResponse(BaseModel):
    summary: RunSummaryModel
    csv: str


class LiveStatus(BaseModel):
    running: bool
    paused: bool
    seq: int
    t: float
    setpoint: float
    throttle: float
    subscribers: int


# Wire protocol: one JSON object per WebSocket message.

class SampleMessage(BaseModel):
    type: Literal["sample"] = "sample"
    seq: int
    t: float
    setpoint: float
    T: float
    V: float
    u: float
    region: str
    throttle: float


class AckMessage(BaseModel):
    type: Literal["ack"] = "ack"
    command: str


class ErrorMessage(BaseModel):
    type: Literal["error"] = "error"
    message: str


class SetSetpointCommand(BaseModel):
    type: Literal["set_setpoint"]
    value: float


class SetThrottleCommand(BaseModel):
    type: Literal["set_throttle"]
    value: float


class PauseCommand(BaseModel):
    type: Literal["pause"]


class ResumeCommand(BaseModel):
    type: Literal["resume"]


class ResetCommand(BaseModel):
    type: Literal["reset"]


class SetControllerCommand(BaseModel):
    type: Literal["set_controller"]
    value: dict[str, Any]


Command = Annotated[
    Union[SetSetpointCommand, SetThrottleCommand, PauseCommand,
          ResumeCommand, ResetCommand, SetControllerCommand],
    Field(discriminator="type"),
]

command_adapter: TypeAdapter[Command] = TypeAdapter(Command)
