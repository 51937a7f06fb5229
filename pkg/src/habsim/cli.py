"""Command line front end.

Batch subcommands call the core directly; serve boots the FastAPI app
under uvicorn. Artifacts land in HABS_LOG_DIR (or the working directory)
unless --out says otherwise.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

from . import calibration, fileio
from .errors import HabsimError
from .simulation import run_closed_loop, run_open_loop_step
from .sysid import identify_regions


def _out_path(explicit: "str | None", default_name: str) -> Path:
    if explicit:
        return Path(explicit)
    return fileio.default_out_dir() / default_name


def cmd_calibrate(args: argparse.Namespace) -> int:
    points = fileio.read_calibration_points(args.points)
    poly = calibration.fit_cubic(points)
    res = calibration.residuals(poly, points)
    print(f"fit: T = {poly.c3:.6g}*V^3 + {poly.c2:.6g}*V^2 "
          f"+ {poly.c1:.6g}*V + {poly.c0:.6g}")
    for p, r in zip(points, res):
        print(f"  T={p.temperature_c:7.2f}  V={p.voltage_v:8.4f}  "
              f"residual={r:+.4f}")
    print(f"rms residual: {calibration.rms_residual(poly, points):.4f}")
    if not calibration.is_strictly_increasing(poly):
        print("warning: fitted cubic is not strictly increasing; "
              "it cannot be inverted", file=sys.stderr)
    out = _out_path(args.out, "calibration.json")
    fileio.write_poly(out, poly)
    print(f"wrote {out}")
    return 0


def cmd_step(args: argparse.Namespace) -> int:
    record = run_open_loop_step(args.u0, args.u1, args.duration, args.ts,
                                args.preset)
    out = _out_path(args.out, f"step_{args.u0:g}_{args.u1:g}.csv")
    fileio.write_step_record(out, record)
    span = (len(record.samples) - 1) * record.ts
    print(f"step {record.u0:g} -> {record.u1:g} V at t={record.t_step:g} s, "
          f"{len(record.samples)} samples over {span:g} s")
    print(f"wrote {out}")
    return 0


def cmd_identify(args: argparse.Namespace) -> int:
    records = [fileio.read_step_record(path) for path in args.records]
    model = identify_regions(records)
    doc = model.to_doc()
    for region in doc["regions"]:
        hi = "inf" if region["u_high"] is None else f"{region['u_high']:g}"
        print(f"  [{region['u_low']:g}, {hi}) V: gain={region['gain']:.4f} "
              f"degC/V  tau={region['tau']:.4f} s")
    if args.out:
        fileio.write_regional_model(args.out, model)
        print(f"wrote {args.out}")
    else:
        print(json.dumps(doc, indent=2))
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    scenario = fileio.read_scenario(args.scenario)
    log = run_closed_loop(scenario)
    out = _out_path(args.out, Path(args.scenario).stem + "_log.csv")
    fileio.write_simlog(out, log)
    summary = log.summary
    for step in summary.steps:
        prefix = (f"  step at t={step.t_start:g} s: "
                  f"{step.baseline:g} -> {step.target:g} degC")
        if step.metrics is None:
            print(f"{prefix}  ({step.note})")
        else:
            m = step.metrics
            rise = "inf" if math.isinf(m.rise_time) else f"{m.rise_time:.2f} s"
            settle = ("inf" if math.isinf(m.settling_time)
                      else f"{m.settling_time:.2f} s")
            print(f"{prefix}  rise {rise}, overshoot {m.overshoot_pct:.1f}%, "
                  f"settle {settle}")
    print(f"  region switches: {summary.switch_count}")
    print(f"wrote {out}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    scenario = fileio.read_scenario(args.scenario) if args.scenario else None
    app = create_app(scenario=scenario, speed=args.speed, panel_dir=args.panel)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="habsim",
        description="Virtual hot air blower trainer: calibrate, identify, "
                    "simulate, serve.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("calibrate",
                       help="fit a cubic calibration to a T,V points CSV")
    p.add_argument("points", help="CSV with header T,V")
    p.add_argument("--out", help="where to write the calibration JSON")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("step", help="record an open-loop drive step")
    p.add_argument("u0", type=float, help="initial drive, DAQ volts")
    p.add_argument("u1", type=float, help="stepped drive, DAQ volts")
    p.add_argument("--duration", type=float, default=60.0,
                   help="post-step seconds to record (extended if the "
                        "region needs longer to settle)")
    p.add_argument("--ts", type=float, default=0.1, help="sample period, s")
    p.add_argument("--preset", default="canonical",
                   choices=["canonical", "empirical"], help="plant preset")
    p.add_argument("--out", help="where to write the record CSV")
    p.set_defaults(func=cmd_step)

    p = sub.add_parser("identify",
                       help="fit per-region first-order models to step records")
    p.add_argument("records", nargs="+",
                   help="step record CSVs, ascending and contiguous")
    p.add_argument("--out", help="write the model JSON here instead of stdout")
    p.set_defaults(func=cmd_identify)

    p = sub.add_parser("simulate", help="run a closed-loop scenario")
    p.add_argument("scenario", help="scenario JSON")
    p.add_argument("--out", help="where to write the run log CSV")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("serve", help="run the live trainer service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--scenario", help="scenario JSON to run live "
                                      "(default: hold 40 degC)")
    p.add_argument("--speed", type=float, default=1.0,
                   help="real-time pacing multiplier")
    p.add_argument("--panel", help="directory with a built operator panel "
                                   "to serve at /")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: "list[str] | None" = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (HabsimError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
