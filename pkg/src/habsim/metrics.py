"""Step-response quality metrics: rise time, overshoot, settling time."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NeverRises, ZeroAmplitude


@dataclass(frozen=True)
class StepMetrics:
    """rise_time: 10% to 90% crossing interval, interpolated between
    samples. overshoot_pct: peak beyond the target as a percentage of the
    commanded amplitude (0 when the response never passes the target).
    settling_time: from the segment start until the response enters the
    +/-2% band around the target for good; inf when it ends outside the
    band, 0 when it never leaves it. rise_time is inf when the 90% level
    is never reached."""

    rise_time: float
    overshoot_pct: float
    settling_time: float


def _first_crossing(t: np.ndarray, z: np.ndarray, level: float) -> float | None:
    """Interpolated time of the first crossing of level, None if never."""
    above = np.nonzero(z >= level)[0]
    if len(above) == 0:
        return None
    i = int(above[0])
    if i == 0:
        return float(t[0])
    frac = (level - z[i - 1]) / (z[i] - z[i - 1])
    return float(t[i - 1] + frac * (t[i] - t[i - 1]))


def compute_step_metrics(times: Sequence[float], values: Sequence[float],
                         baseline: float, target: float) -> StepMetrics:
    """Metrics of a response segment commanded from baseline to target.

    The amplitude target - baseline normalizes everything, so cooling
    steps work the same as heating ones. Raises ZeroAmplitude when target
    equals baseline and NeverRises when the 10% level is never crossed.
    """
    amplitude = target - baseline
    if amplitude == 0:
        raise ZeroAmplitude("target equals baseline, no step to measure")
    t = np.asarray(times, dtype=float)
    y = np.asarray(values, dtype=float)
    if len(t) != len(y) or len(t) < 2:
        raise ValueError("need matching time/value arrays with at least 2 samples")
    z = (y - baseline) / amplitude

    t10 = _first_crossing(t, z, 0.1)
    if t10 is None:
        raise NeverRises("response never crosses 10% of the commanded step")
    t90 = _first_crossing(t, z, 0.9)
    rise = math.inf if t90 is None else t90 - t10

    overshoot = max(0.0, float(z.max()) - 1.0) * 100.0

    out_of_band = np.nonzero(np.abs(z - 1.0) > 0.02)[0]
    if len(out_of_band) == 0:
        settling = 0.0
    elif out_of_band[-1] == len(z) - 1:
        settling = math.inf
    else:
        settling = float(t[out_of_band[-1] + 1] - t[0])
    return StepMetrics(rise_time=rise, overshoot_pct=overshoot,
                       settling_time=settling)
