"""Asyncio loop that runs one simulation in real time and fans samples out
to WebSocket subscribers.

Commands are validated when submitted (so the caller gets its ack or
error right away) and applied at the next tick boundary. The command
queue is bounded; when it overflows the oldest entry is dropped and
logged. Subscriber queues are bounded too; a subscriber that cannot keep
up is disconnected rather than allowed to stall the loop.
"""
from __future__ import annotations

import asyncio
import logging
from collections import deque
from typing import Optional

import pydantic

from ..calibration import CalibrationPoly
from ..control import controller_from_doc
from ..errors import HabsimError
from ..simulation import ClosedLoopSim, Scenario, TickRow
from . import schemas

logger = logging.getLogger(__name__)

_COMMAND_QUEUE_LIMIT = 64
_SUBSCRIBER_QUEUE_LIMIT = 256

# Sentinel put on a subscriber queue to say "you were disconnected".
CLOSE = None


class LiveLoop:
    """Real-time driver around a ClosedLoopSim.

    speed scales wall-clock pacing (2.0 ticks twice as fast); the
    simulated timestep is unchanged. seq increases for every emitted
    sample and keeps increasing across reset, so clients can always
    detect missed samples.
    """

    def __init__(self, scenario: Scenario,
                 calib: Optional[CalibrationPoly] = None,
                 speed: float = 1.0):
        if speed <= 0:
            raise ValueError(f"speed must be positive, got {speed}")
        self.sim = ClosedLoopSim(scenario, calib)
        self.speed = speed
        self.paused = False
        self.seq = 0
        self._commands: deque[schemas.Command] = deque(maxlen=_COMMAND_QUEUE_LIMIT)
        self._subscribers: list[asyncio.Queue] = []
        self._task: Optional[asyncio.Task] = None

    # lifecycle

    def start(self) -> None:
        if self._task is None or self._task.done():
            self._task = asyncio.get_running_loop().create_task(self._run())

    async def stop(self) -> None:
        if self._task is not None:
            self._task.cancel()
            try:
                await self._task
            except asyncio.CancelledError:
                pass
            self._task = None

    @property
    def running(self) -> bool:
        return self._task is not None and not self._task.done()

    # subscriptions

    def subscribe(self, maxsize: int = _SUBSCRIBER_QUEUE_LIMIT) -> asyncio.Queue:
        q: asyncio.Queue = asyncio.Queue(maxsize=maxsize)
        self._subscribers.append(q)
        return q

    def unsubscribe(self, q: asyncio.Queue) -> None:
        try:
            self._subscribers.remove(q)
        except ValueError:
            pass

    # commands

    def handle_command_text(self, text: str) -> str:
        """Validate one inbound message; returns the reply JSON to send to
        the issuing client. Valid commands are queued for the next tick."""
        try:
            command = schemas.command_adapter.validate_json(text)
        except pydantic.ValidationError as exc:
            return schemas.ErrorMessage(
                message=f"bad command: {exc.errors()[0]['msg']}").model_dump_json()
        reply = self._validate(command)
        if reply is not None:
            return reply.model_dump_json()
        if len(self._commands) == self._commands.maxlen:
            dropped = self._commands[0]
            logger.warning("command queue full, dropping oldest %s", dropped.type)
        self._commands.append(command)
        return schemas.AckMessage(command=command.type).model_dump_json()

    def _validate(self, command: schemas.Command) -> Optional[schemas.ErrorMessage]:
        """Reject commands that would fail when applied."""
        try:
            if isinstance(command, schemas.SetThrottleCommand) and command.value <= 0:
                return schemas.ErrorMessage(
                    message=f"throttle factor must be positive, got {command.value}")
            if isinstance(command, schemas.SetControllerCommand):
                controller = controller_from_doc(command.value)
                if abs(controller.ts - self.sim.scenario.ts) > 1e-12:
                    return schemas.ErrorMessage(
                        message=f"controller ts {controller.ts} does not match "
                                f"loop ts {self.sim.scenario.ts}")
        except (HabsimError, ValueError, KeyError, TypeError) as exc:
            return schemas.ErrorMessage(message=str(exc))
        return None

    def _apply_commands(self) -> None:
        while self._commands:
            command = self._commands.popleft()
            try:
                if isinstance(command, schemas.SetSetpointCommand):
                    self.sim.set_setpoint(command.value)
                elif isinstance(command, schemas.SetThrottleCommand):
                    self.sim.set_throttle_factor(command.value)
                elif isinstance(command, schemas.PauseCommand):
                    self.paused = True
                elif isinstance(command, schemas.ResumeCommand):
                    self.paused = False
                elif isinstance(command, schemas.ResetCommand):
                    self.sim.reset()
                elif isinstance(command, schemas.SetControllerCommand):
                    self.sim.set_controller(command.value)
            except (HabsimError, ValueError) as exc:
                # Validation should have caught this; log and keep ticking.
                logger.error("command %s failed to apply: %s", command.type, exc)

    # the loop itself

    def sample_message(self, row: TickRow) -> schemas.SampleMessage:
        return schemas.SampleMessage(
            seq=self.seq, t=row.t, setpoint=row.setpoint,
            T=row.temp_measured, V=row.volt_measured, u=row.u_daq,
            region=row.region, throttle=row.throttle)

    def _fanout(self, text: str) -> None:
        for q in list(self._subscribers):
            try:
                q.put_nowait(text)
            except asyncio.QueueFull:
                logger.warning("subscriber too slow, disconnecting")
                self.unsubscribe(q)
                try:
                    q.get_nowait()  # make room so the close marker arrives
                    q.put_nowait(CLOSE)
                except (asyncio.QueueEmpty, asyncio.QueueFull):
                    pass

    async def _run(self) -> None:
        loop = asyncio.get_running_loop()
        tick = self.sim.scenario.ts / self.speed
        deadline = loop.time()
        while True:
            self._apply_commands()
            if not self.paused:
                row = self.sim.step()
                self.seq += 1
                self._fanout(self.sample_message(row).model_dump_json())
            deadline += tick
            delay = deadline - loop.time()
            if delay < -5 * tick:
                logger.warning("live loop behind by %.3f s, resyncing", -delay)
                deadline = loop.time()
                delay = 0.0
            await asyncio.sleep(max(0.0, delay))

    def status(self) -> schemas.LiveStatus:
        return schemas.LiveStatus(
            running=self.running, paused=self.paused, seq=self.seq,
            t=self.sim.t, setpoint=self.sim.setpoint,
            throttle=self.sim.config.throttle_factor,
            subscribers=len(self._subscribers))
