"""Error types raised by the habsim core modules.

Everything derives from HabsimError (itself a ValueError) so callers can
catch the whole family or treat them as ordinary value errors.
"""


class HabsimError(ValueError):
    """Base class for all habsim-specific errors."""


# calibration

class FewerThanFourPoints(HabsimError):
    """A cubic fit needs at least four calibration points."""


class DegenerateVoltages(HabsimError):
    """Calibration voltages are not distinct enough to fit a cubic."""


class NonMonotonePoly(HabsimError):
    """Calibration polynomial is not strictly increasing, cannot invert."""


# plant

class InputOutOfRange(HabsimError):
    """Plant drive input outside the DAQ output range."""


class NonPositiveTimestep(HabsimError):
    """Timestep must be strictly positive."""


class NonPositiveFactor(HabsimError):
    """Throttle factor must be strictly positive."""


# controller

class NegativeInput(HabsimError):
    """Region selection needs a non-negative previous output."""


# identification

class ZeroInputStep(HabsimError):
    """Step record has equal input levels, nothing to identify."""


class NotSettled(HabsimError):
    """Step response still moving at the end of the record."""


class NonMonotoneOnset(HabsimError):
    """Response never crosses the 63.2% level after the step."""


class NonContiguousSegments(HabsimError):
    """Step records do not form contiguous ascending input segments."""


# metrics

class ZeroAmplitude(HabsimError):
    """Step metrics need a nonzero commanded amplitude."""


class NeverRises(HabsimError):
    """Response never crosses the 10% level, rise time undefined."""
