"""HTTP and WebSocket surface over the core package."""
from __future__ import annotations

import asyncio
import contextlib
import math
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from .. import calibration as calib_mod
from ..calibration import CalibrationPoly
from ..errors import HabsimError
from ..simulation import (Scenario, run_closed_loop, run_open_loop_step,
                          scenario_from_doc)
from ..sysid import StepRecord, identify_regions
from . import schemas
from .live import CLOSE, LiveLoop


def default_scenario() -> Scenario:
    """What the service runs when nobody supplies a scenario: hold 40 degC
    from ambient, stock plant and controller. duration is nominal, the
    live loop ticks until stopped."""
    return Scenario(duration=3600.0, setpoints=((0.0, 40.0),))


def create_app(scenario: Optional[Scenario] = None,
               calib: Optional[CalibrationPoly] = None,
               speed: float = 1.0,
               panel_dir: "str | Path | None" = None) -> FastAPI:
    live = LiveLoop(scenario or default_scenario(), calib=calib, speed=speed)

    @contextlib.asynccontextmanager
    async def lifespan(app: FastAPI):
        live.start()
        yield
        await live.stop()

    app = FastAPI(title="habsim", lifespan=lifespan)
    app.state.live = live

    @app.exception_handler(HabsimError)
    async def habsim_error(request, exc: HabsimError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(ValueError)
    async def value_error(request, exc: ValueError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.post("/calibration/fit", response_model=schemas.FitResponse)
    async def calibration_fit(req: schemas.FitRequest):
        points = [calib_mod.CalibrationPoint(p.temperature_c, p.voltage_v)
                  for p in req.points]
        poly = calib_mod.fit_cubic(points)
        return schemas.FitResponse(
            poly=schemas.PolyModel(**poly.to_doc()),
            residuals=calib_mod.residuals(poly, points),
            rms_residual=calib_mod.rms_residual(poly, points))

    @app.post("/calibration/eval", response_model=schemas.EvalResponse)
    async def calibration_eval(req: schemas.EvalRequest):
        poly = CalibrationPoly.from_doc(req.poly.model_dump())
        return schemas.EvalResponse(
            temperature_c=calib_mod.eval_poly(poly, req.voltage_v))

    @app.post("/calibration/invert", response_model=schemas.InvertResponse)
    async def calibration_invert(req: schemas.InvertRequest):
        poly = CalibrationPoly.from_doc(req.poly.model_dump())
        return schemas.InvertResponse(
            voltage_v=calib_mod.invert_poly(poly, req.temperature_c))

    @app.post("/step", response_model=schemas.StepRecordModel)
    async def step(req: schemas.StepRequest):
        record = await asyncio.to_thread(
            run_open_loop_step, req.u0, req.u1, req.duration_s, req.ts_s,
            req.plant_preset)
        return schemas.StepRecordModel(
            ts_s=record.ts, t_step_s=record.t_step, u0=record.u0,
            u1=record.u1, samples=list(record.samples))

    @app.post("/identify", response_model=schemas.IdentifyResponse)
    async def identify(req: schemas.IdentifyRequest):
        records = [StepRecord(ts=r.ts_s, t_step=r.t_step_s, u0=r.u0, u1=r.u1,
                              samples=tuple(r.samples))
                   for r in req.records]
        model = identify_regions(records)
        return schemas.IdentifyResponse(regions=[
            schemas.RegionModelOut(
                u_low=r.u_low,
                u_high=None if math.isinf(r.u_high) else r.u_high,
                gain=r.model.gain, tau=r.model.tau)
            for r in model.regions])

    @app.post("/simulate", response_model=schemas.SimulateResponse)
    async def simulate(req: schemas.SimulateRequest):
        sc = scenario_from_doc(req.scenario)
        log = await asyncio.to_thread(run_closed_loop, sc)
        steps = []
        for s in log.summary.steps:
            m = s.metrics
            steps.append(schemas.StepSummaryModel(
                t_start=s.t_start, baseline=s.baseline, target=s.target,
                rise_time=None if m is None else m.rise_time,
                overshoot_pct=None if m is None else m.overshoot_pct,
                settling_time=None if m is None else m.settling_time,
                note=s.note))
        return schemas.SimulateResponse(
            summary=schemas.RunSummaryModel(
                switch_count=log.summary.switch_count, steps=steps),
            csv=log.to_csv())

    @app.get("/live/status", response_model=schemas.LiveStatus)
    async def live_status():
        return live.status()

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        await ws.accept()
        q = live.subscribe()

        async def sender():
            while True:
                item = await q.get()
                if item is CLOSE:
                    with contextlib.suppress(Exception):
                        await ws.close(code=1013)  # try again later
                    return
                await ws.send_text(item)

        send_task = asyncio.get_running_loop().create_task(sender())
        try:
            while True:
                text = await ws.receive_text()
                reply = live.handle_command_text(text)
                # Replies ride the same queue so the socket has one writer.
                try:
                    q.put_nowait(reply)
                except asyncio.QueueFull:
                    pass  # subscriber is about to be disconnected anyway
        except WebSocketDisconnect:
            pass
        finally:
            live.unsubscribe(q)
            send_task.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await send_task

    if panel_dir is not None:
        panel = Path(panel_dir)
        index = panel / "index.html"

        @app.get("/", include_in_schema=False)
        async def panel_index():
            return FileResponse(index)

        app.mount("/panel", StaticFiles(directory=panel), name="panel")
    else:
        @app.get("/", include_in_schema=False)
        async def root():
            return {"service": "habsim", "live": "/ws", "docs": "/docs"}

    return app
