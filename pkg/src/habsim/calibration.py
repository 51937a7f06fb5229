"""Thermistor bridge calibration: cubic volts-to-temperature curve.

The trainer reports temperature as a bridge voltage in roughly the -3..8 V
band. A cubic polynomial maps that voltage to degrees Celsius; the inverse
map (temperature back to voltage) is what the simulator uses to synthesize
realistic sensor readings.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from numpy.polynomial import Polynomial

from .errors import DegenerateVoltages, FewerThanFourPoints, NonMonotonePoly


@dataclass(frozen=True)
class CalibrationPoint:
    """One bench measurement: a known temperature and the voltage it produced."""

    temperature_c: float
    voltage_v: float


@dataclass(frozen=True)
class CalibrationPoly:
    """Cubic calibration T(v) = c3*v^3 + c2*v^2 + c1*v + c0."""

    c3: float
    c2: float
    c1: float
    c0: float

    def to_doc(self) -> dict:
        return {"c3": self.c3, "c2": self.c2, "c1": self.c1, "c0": self.c0}

    @classmethod
    def from_doc(cls, doc: dict) -> "CalibrationPoly":
        return cls(c3=float(doc["c3"]), c2=float(doc["c2"]),
                   c1=float(doc["c1"]), c0=float(doc["c0"]))


# Stock curve shipped with the trainer's sensor board.
DEFAULT_CALIBRATION = CalibrationPoly(c3=0.072, c2=-0.3033, c1=2.2459, c0=38.1792)

# Bench measurements taken against a reference thermometer; the stock curve
# is the least-squares cubic through these six points.
REFERENCE_POINTS: tuple[CalibrationPoint, ...] = (
    CalibrationPoint(23.0, -3.5299),
    CalibrationPoint(30.0, -2.5177),
    CalibrationPoint(40.0, 1.2735),
    CalibrationPoint(50.0, 4.5324),
    CalibrationPoint(60.0, 6.7338),
    CalibrationPoint(70.0, 7.5873),
)


def eval_poly(poly: CalibrationPoly, voltage: float) -> float:
    """Evaluate the calibration cubic at a voltage (Horner form)."""
    return ((poly.c3 * voltage + poly.c2) * voltage + poly.c1) * voltage + poly.c0


def fit_cubic(points: Sequence[CalibrationPoint]) -> CalibrationPoly:
    """Least-squares cubic through calibration points.

    Voltages are centered and scaled before building the Vandermonde system
    so the normal equations stay well conditioned, then the coefficients are
    mapped back to the raw-voltage basis.
    """
    if len(points) < 4:
        raise FewerThanFourPoints(
            f"cubic fit needs at least 4 points, got {len(points)}")
    v = np.array([p.voltage_v for p in points], dtype=float)
    t = np.array([p.temperature_c for p in points], dtype=float)
    span = v.max() - v.min()
    if span < 1e-9:
        raise DegenerateVoltages(
            f"voltage span {span:.3g} V is too small to fit a cubic")
    center = (v.max() + v.min()) / 2.0
    scale = span / 2.0
    x = (v - center) / scale
    vand = np.vander(x, 4, increasing=True)
    coeffs, _, rank, _ = np.linalg.lstsq(vand, t, rcond=None)
    if rank < 4:
        raise DegenerateVoltages(
            "voltages are degenerate (rank-deficient Vandermonde)")
    # Compose with the affine rescaling to recover raw-voltage coefficients.
    scaled = Polynomial(coeffs)
    raw = scaled(Polynomial([-center / scale, 1.0 / scale]))
    c0, c1, c2, c3 = (list(raw.coef) + [0.0] * 4)[:4]
    return CalibrationPoly(c3=float(c3), c2=float(c2), c1=float(c1), c0=float(c0))


def is_strictly_increasing(poly: CalibrationPoly) -> bool:
    """True when the cubic's derivative is positive for every voltage.

    The derivative 3*c3*v^2 + 2*c2*v + c1 never crosses zero exactly when
    its discriminant is negative; it is then positive everywhere iff it is
    positive at v=0.
    """
    disc = (2.0 * poly.c2) ** 2 - 4.0 * (3.0 * poly.c3) * poly.c1
    return disc < 0.0 and poly.c1 > 0.0


def invert_poly(poly: CalibrationPoly, temperature_c: float) -> float:
    """Voltage that the calibration maps to the given temperature.

    Requires a strictly increasing cubic. Solved by bracketed bisection to
    1e-12 followed by one Newton polish step.
    """
    if not is_strictly_increasing(poly):
        raise NonMonotonePoly(
            "calibration cubic is not strictly increasing over all voltages")
    lo, hi = -10.0, 15.0
    # A strictly increasing cubic is onto, so widening always brackets.
    while eval_poly(poly, lo) > temperature_c:
        lo -= (hi - lo)
    while eval_poly(poly, hi) < temperature_c:
        hi += (hi - lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if eval_poly(poly, mid) < temperature_c:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-12:
            break
    v = 0.5 * (lo + hi)
    deriv = (3.0 * poly.c3 * v + 2.0 * poly.c2) * v + poly.c1
    if abs(deriv) > 1e-9:
        v -= (eval_poly(poly, v) - temperature_c) / deriv
    return v


def residuals(poly: CalibrationPoly, points: Iterable[CalibrationPoint]) -> list[float]:
    """Per-point fit errors, temperature minus prediction."""
    return [p.temperature_c - eval_poly(poly, p.voltage_v) for p in points]


def rms_residual(poly: CalibrationPoly, points: Sequence[CalibrationPoint]) -> float:
    res = residuals(poly, points)
    return math.sqrt(sum(r * r for r in res) / len(res))
