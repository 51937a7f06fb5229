"""Virtual hot air blower process trainer.

Core pieces: thermistor calibration (calibration), the piecewise-linear
first-order plant (plant), step-response identification (sysid), the
region-switched PI controller (control), scenario runs and open-loop
experiments (simulation), metrics, file formats (fileio), and a live
operator service (service).
"""

from . import errors
from .calibration import (CalibrationPoint, CalibrationPoly,
                          DEFAULT_CALIBRATION, REFERENCE_POINTS, eval_poly,
                          fit_cubic, invert_poly, residuals, rms_residual)
from .control import (ControllerRegion, PIGains, SwitchedController,
                      controller_from_doc, controller_to_doc,
                      default_controller, pi_tick, region_label,
                      select_region, switched_tick)
from .metrics import StepMetrics, compute_step_metrics
from .plant import (DAQ_RANGE, PlantConfig, PlantState, canonical_config,
                    empirical_config, initial_state, measure, plant_tick,
                    resolve_config, set_throttle, steady_state_temp,
                    time_constant)
from .simulation import (ClosedLoopSim, RunSummary, Scenario, SimLog,
                         StepSummary, TickRow, run_closed_loop,
                         run_open_loop_step, scenario_from_doc,
                         scenario_to_doc)
from .sysid import (FirstOrderModel, RegionalModel, RegionModel, StepRecord,
                    estimate_first_order, identify_regions)

__version__ = "0.1.0"

__all__ = [
    "errors",
    "CalibrationPoint", "CalibrationPoly", "DEFAULT_CALIBRATION",
    "REFERENCE_POINTS", "eval_poly", "fit_cubic", "invert_poly",
    "residuals", "rms_residual",
    "ControllerRegion", "PIGains", "SwitchedController",
    "controller_from_doc", "controller_to_doc", "default_controller",
    "pi_tick", "region_label", "select_region", "switched_tick",
    "StepMetrics", "compute_step_metrics",
    "DAQ_RANGE", "PlantConfig", "PlantState", "canonical_config",
    "empirical_config", "initial_state", "measure", "plant_tick",
    "resolve_config", "set_throttle", "steady_state_temp", "time_constant",
    "ClosedLoopSim", "RunSummary", "Scenario", "SimLog", "StepSummary",
    "TickRow", "run_closed_loop", "run_open_loop_step", "scenario_from_doc",
    "scenario_to_doc",
    "FirstOrderModel", "RegionalModel", "RegionModel", "StepRecord",
    "estimate_first_order", "identify_regions",
    "__version__",
]
