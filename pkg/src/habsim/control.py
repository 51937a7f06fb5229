"""Region-switched discrete PI controller.

Gains are scheduled on the previous saturated output: whichever drive
region the controller was commanding last tick selects the gain pair for
this tick. The integrator is shared across regions so switches are
bumpless, and integration is conditional while the output saturates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Mapping, Sequence

from .errors import NegativeInput, NonPositiveTimestep

_ROMAN = ("I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X")


def region_label(index: int) -> str:
    """Display label for a region index (I, II, III, ...)."""
    return _ROMAN[index] if 0 <= index < len(_ROMAN) else str(index + 1)


@dataclass(frozen=True)
class PIGains:
    kp: float
    ki: float


@dataclass(frozen=True)
class ControllerRegion:
    """Half-open drive interval [u_low, u_high) with its gain pair."""

    u_low: float
    u_high: float  # math.inf for the top region
    gains: PIGains

    def __post_init__(self):
        if self.u_low < 0:
            raise ValueError(f"region lower bound must be >= 0, got {self.u_low}")
        if not self.u_low < self.u_high:
            raise ValueError(
                f"region bounds must be ascending, got [{self.u_low}, {self.u_high})")


def default_regions() -> tuple[ControllerRegion, ...]:
    """Stock gain schedule for the three drive regions."""
    return (
        ControllerRegion(0.0, 1.0, PIGains(kp=1.3, ki=0.11)),
        ControllerRegion(1.0, 2.0, PIGains(kp=1.5, ki=0.13)),
        ControllerRegion(2.0, math.inf, PIGains(kp=1.8, ki=0.12)),
    )


@dataclass(frozen=True)
class SwitchedController:
    """Controller parameters plus its two state variables.

    integrator is the accumulated integral term; u_prev is the saturated
    output of the previous tick (0 before the first tick) and is what the
    region selection keys on.
    """

    regions: tuple[ControllerRegion, ...]
    ts: float
    sat_low: float = 0.0
    sat_high: float = 4.0
    anti_windup: bool = True
    integrator: float = 0.0
    u_prev: float = 0.0

    def __post_init__(self):
        if self.ts <= 0:
            raise NonPositiveTimestep(f"controller ts must be positive, got {self.ts}")
        if not self.sat_low < self.sat_high:
            raise ValueError("saturation bounds must be ascending")
        if not self.regions:
            raise ValueError("need at least one controller region")
        if self.regions[0].u_low != 0.0:
            raise ValueError("first region must start at u=0")
        for a, b in zip(self.regions, self.regions[1:]):
            if a.u_high != b.u_low:
                raise ValueError(
                    f"regions must tile contiguously, gap at {a.u_high} vs {b.u_low}")
        if not math.isinf(self.regions[-1].u_high):
            raise ValueError("last region must extend to infinity")


def default_controller(ts: float = 0.1) -> SwitchedController:
    return SwitchedController(regions=default_regions(), ts=ts)


def select_region(u_prev: float, regions: Sequence[ControllerRegion]) -> int:
    """Index of the region whose [u_low, u_high) contains u_prev."""
    if u_prev < 0:
        raise NegativeInput(f"previous output must be >= 0, got {u_prev}")
    for i, region in enumerate(regions):
        if region.u_low <= u_prev < region.u_high:
            return i
    raise NegativeInput(f"no region contains {u_prev}")  # unreachable when tiled


def pi_tick(gains: PIGains, integrator: float, error: float,
            ts: float) -> tuple[float, float]:
    """One backward-Euler PI update: returns (raw output, new integrator)."""
    if ts <= 0:
        raise NonPositiveTimestep(f"timestep must be positive, got {ts}")
    new_integ = integrator + gains.ki * ts * error
    return gains.kp * error + new_integ, new_integ


def switched_tick(controller: SwitchedController,
                  error: float) -> tuple[float, SwitchedController]:
    """One tick of the switched loop: returns (saturated output, new state).

    The gain pair comes from the region of u_prev. When the raw output
    saturates and the error would push it further out, the integrator
    update is discarded (conditional integration); disable anti_windup to
    let it wind up instead.
    """
    idx = select_region(controller.u_prev, controller.regions)
    gains = controller.regions[idx].gains
    u_raw, new_integ = pi_tick(gains, controller.integrator, error, controller.ts)
    u = min(max(u_raw, controller.sat_low), controller.sat_high)
    if controller.anti_windup and u != u_raw:
        pushing_out = (u_raw > controller.sat_high and error > 0) or \
                      (u_raw < controller.sat_low and error < 0)
        if pushing_out:
            new_integ = controller.integrator
    return u, replace(controller, integrator=new_integ, u_prev=u)


def controller_to_doc(controller: SwitchedController) -> dict:
    regions = []
    for r in controller.regions:
        regions.append({
            "u_low": r.u_low,
            "u_high": None if math.isinf(r.u_high) else r.u_high,
            "kp": r.gains.kp,
            "ki": r.gains.ki,
        })
    return {
        "regions": regions,
        "ts": controller.ts,
        "sat_low": controller.sat_low,
        "sat_high": controller.sat_high,
        "anti_windup": controller.anti_windup,
    }


def controller_from_doc(doc: Mapping) -> SwitchedController:
    """Parse a controller doc; null u_high means unbounded above.

    anti_windup is optional and defaults to on.
    """
    allowed = {"regions", "ts", "sat_low", "sat_high", "anti_windup"}
    unknown = set(doc) - allowed
    if unknown:
        raise ValueError(f"unknown controller keys: {sorted(unknown)}")
    regions = []
    for entry in doc["regions"]:
        u_high = entry.get("u_high")
        regions.append(ControllerRegion(
            u_low=float(entry["u_low"]),
            u_high=math.inf if u_high is None else float(u_high),
            gains=PIGains(kp=float(entry["kp"]), ki=float(entry["ki"])),
        ))
    return SwitchedController(
        regions=tuple(regions),
        ts=float(doc["ts"]),
        sat_low=float(doc.get("sat_low", 0.0)),
        sat_high=float(doc.get("sat_high", 4.0)),
        anti_windup=bool(doc.get("anti_windup", True)),
    )
