"""First-order model identification from step-response records.

The estimator is the classic two-point method: steady gain from the
settled pre/post levels, time constant from the interpolated crossing of
the 63.2% level. identify_regions stitches per-segment estimates into a
piecewise model over the drive range.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import (NonContiguousSegments, NonMonotoneOnset, NotSettled,
                     ZeroInputStep)

# Fraction of the excursion reached after one time constant.
_TAU_LEVEL = 1.0 - math.exp(-1.0)


@dataclass(frozen=True)
class StepRecord:
    """Uniformly sampled temperature trace around a single input step.

    samples[i] is taken at time i*ts; the input is u0 before t_step and u1
    from t_step on. The sample at t_step itself predates the step's effect
    (zero-order hold).
    """

    ts: float
    t_step: float
    u0: float
    u1: float
    samples: tuple[float, ...]

    def __post_init__(self):
        if self.ts <= 0:
            raise ValueError(f"sample period must be positive, got {self.ts}")
        if len(self.samples) < 2:
            raise ValueError("need at least two samples")
        if not (0.0 <= self.t_step <= (len(self.samples) - 1) * self.ts + 1e-9):
            raise ValueError("t_step must fall inside the record")

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self.samples)) * self.ts


@dataclass(frozen=True)
class FirstOrderModel:
    """Gain (degC per volt) and time constant (s) of one drive segment."""

    gain: float
    tau: float

    def __post_init__(self):
        if self.tau <= 0:
            raise ValueError(f"time constant must be positive, got {self.tau}")


@dataclass(frozen=True)
class RegionModel:
    u_low: float
    u_high: float  # math.inf for the top region
    model: FirstOrderModel


@dataclass(frozen=True)
class RegionalModel:
    """Piecewise first-order model over contiguous drive intervals."""

    regions: tuple[RegionModel, ...]

    def model_for(self, u: float) -> FirstOrderModel:
        for r in self.regions:
            if r.u_low <= u < r.u_high:
                return r.model
        raise ValueError(f"no region contains drive {u}")

    def to_doc(self) -> dict:
        return {"regions": [
            {"u_low": r.u_low,
             "u_high": None if math.isinf(r.u_high) else r.u_high,
             "gain": r.model.gain,
             "tau": r.model.tau}
            for r in self.regions
        ]}

    @classmethod
    def from_doc(cls, doc: Mapping) -> "RegionalModel":
        regions = []
        for entry in doc["regions"]:
            u_high = entry.get("u_high")
            regions.append(RegionModel(
                u_low=float(entry["u_low"]),
                u_high=math.inf if u_high is None else float(u_high),
                model=FirstOrderModel(gain=float(entry["gain"]),
                                      tau=float(entry["tau"]))))
        return cls(regions=tuple(regions))


def estimate_first_order(record: StepRecord) -> FirstOrderModel:
    """Fit gain and time constant to one step record.

    Raises ZeroInputStep when the input did not move, NotSettled when the
    final 10% of samples still vary by 2% of the excursion or more, and
    NonMonotoneOnset when the 63.2% level is never crossed after the step
    (or was already exceeded at the step instant).
    """
    if abs(record.u1 - record.u0) < 1e-12:
        raise ZeroInputStep(f"input held at {record.u0}, nothing to identify")
    t = record.times
    y = np.asarray(record.samples, dtype=float)
    pre = y[t <= record.t_step + 1e-9]
    y0 = float(pre.mean())
    tail = y[int(math.floor(0.9 * len(y))):]
    y_ss = float(tail.mean())
    excursion = y_ss - y0
    if float(tail.max() - tail.min()) >= 0.02 * abs(excursion):
        raise NotSettled(
            "response still moving in the final 10% of the record "
            f"(tail span {float(tail.max() - tail.min()):.4g})")
    gain = excursion / (record.u1 - record.u0)
    post_mask = t >= record.t_step - 1e-9
    tp = t[post_mask]
    z = (y[post_mask] - y0) / excursion
    above = np.nonzero(z >= _TAU_LEVEL)[0]
    if len(above) == 0 or above[0] == 0:
        raise NonMonotoneOnset(
            "response does not cross the 63.2% level after the step onset")
    i = int(above[0])
    frac = (_TAU_LEVEL - z[i - 1]) / (z[i] - z[i - 1])
    t_cross = tp[i - 1] + frac * (tp[i] - tp[i - 1])
    tau = float(t_cross - record.t_step)
    if tau <= 0:
        raise NonMonotoneOnset("63.2% crossing precedes the step onset")
    return FirstOrderModel(gain=gain, tau=tau)


def identify_regions(records: Sequence[StepRecord]) -> RegionalModel:
    """Piecewise model from ascending, contiguous step records.

    Record k must start where record k-1 ended (u0 == previous u1). The
    fitted intervals are [0, u1_0), [u1_0, u1_1), ..., [u1_last, inf) with
    the last record's model extended upward.
    """
    if not records:
        raise ValueError("need at least one step record")
    for rec in records:
        if rec.u1 <= rec.u0:
            raise NonContiguousSegments(
                f"records must step upward, got {rec.u0} -> {rec.u1}")
    for prev, nxt in zip(records, records[1:]):
        if abs(nxt.u0 - prev.u1) > 1e-9:
            raise NonContiguousSegments(
                f"segment starting at {nxt.u0} does not continue from {prev.u1}")
    models = [estimate_first_order(rec) for rec in records]
    bounds = [0.0] + [rec.u1 for rec in records[:-1]] + [math.inf]
    regions = tuple(
        RegionModel(u_low=lo, u_high=hi, model=m)
        for lo, hi, m in zip(bounds, bounds[1:], models))
    return RegionalModel(regions=regions)
