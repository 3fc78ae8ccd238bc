"""Live session service: command ingestion and fixed-rate telemetry fan-out.

The pacing logic lives in the synchronous SessionLoop so the rate and
ordering contracts are testable without sockets; the websocket layer wraps
it with one bounded outbound queue per client (slow clients are dropped
rather than buffered without limit).
"""

from __future__ import annotations

import asyncio
import secrets
from dataclasses import dataclass, field
from typing import Optional

from websockets.asyncio.server import serve
from websockets.exceptions import ConnectionClosed

from ..errors import ProtocolError
from . import protocol
from .protocol import WireMessage
from .session import Session

TELEMETRY_HZ = 20.0
DRIVE_INTERVAL = 0.02  # wall seconds between service wakeups
MAX_CLIENT_QUEUE = 256
MAX_COMMAND_QUEUE = 1024


class SessionLoop:
    """Wall-clock to simulation pacing plus broadcast scheduling.

    ``advance_wall`` runs every simulation tick that has come due at the
    given speed multiplier and returns the broadcast messages those ticks
    produced: a path snapshot whenever the revision changed and a state
    message at the telemetry cadence (in simulation time, so headless speeds
    scale the wall rate accordingly).
    """

    def __init__(self, session: Session, *, speed: float = 1.0, telemetry_hz: float = TELEMETRY_HZ):
        if speed <= 0:
            raise ValueError("speed must be positive")
        self.session = session
        self.speed = speed
        dt = session.config.dt
        self._ticks_per_state = max(1, int(round(1.0 / (telemetry_hz * dt))))
        self._carry = 0.0
        self._tick_count = 0
        self._seen_revision = session.path.revision
        self._out_seq = 0

    def _next_seq(self) -> int:
        self._out_seq += 1
        return self._out_seq

    def snapshot_messages(self) -> list[WireMessage]:
        """Join sequence for a new client: environment then path snapshot."""
        return [
            WireMessage("env", self._next_seq(), self.session.env_payload()),
            WireMessage("path", self._next_seq(), self.session.path_payload()),
        ]

    def broadcasts_after_tick(self) -> list[WireMessage]:
        out: list[WireMessage] = []
        if self.session.path.revision != self._seen_revision:
            self._seen_revision = self.session.path.revision
            out.append(WireMessage("path", self._next_seq(), self.session.path_payload()))
        if self._tick_count % self._ticks_per_state == 0:
            out.append(WireMessage("state", self._next_seq(), self.session.state_payload()))
        return out

    def run_tick(self) -> list[WireMessage]:
        self.session.tick()
        self._tick_count += 1
        return self.broadcasts_after_tick()

    def advance_wall(self, wall_dt: float) -> list[WireMessage]:
        """Advance by elapsed wall time; returns all due broadcasts in order."""
        dt = self.session.config.dt
        self._carry += wall_dt * self.speed
        out: list[WireMessage] = []
        while self._carry >= dt:
            self._carry -= dt
            out.extend(self.run_tick())
        return out


@dataclass
class _Client:
    queue: asyncio.Queue = field(default_factory=lambda: asyncio.Queue(maxsize=MAX_CLIENT_QUEUE))
    authenticated: bool = False
    closed: bool = False


class SessionService:
    """Websocket front end for one session."""

    def __init__(
        self,
        session: Session,
        *,
        host: str = "127.0.0.1",
        port: int = 0,
        speed: float = 1.0,
        token: Optional[str] = None,
    ):
        self.loop_core = SessionLoop(session, speed=speed)
        self.session = session
        self.host = host
        self.port = port
        self.token = token or secrets.token_hex(8)
        self.bound_port: Optional[int] = None
        self._clients: dict[object, _Client] = {}
        self._commands: asyncio.Queue = asyncio.Queue(maxsize=MAX_COMMAND_QUEUE)
        self._stopping = asyncio.Event()
        self.ready = asyncio.Event()

    # ------------------------------------------------------------- lifecycle

    async def run(self) -> None:
        async with serve(self._handle_client, self.host, self.port) as server:
            self.bound_port = server.sockets[0].getsockname()[1] if server.sockets else self.port
            self.ready.set()
            try:
                await self._drive()
            finally:
                for client in list(self._clients.values()):
                    client.closed = True

    def stop(self) -> None:
        self._stopping.set()

    async def _drive(self) -> None:
        loop = asyncio.get_running_loop()
        last = loop.time()
        while not self._stopping.is_set():
            await asyncio.sleep(DRIVE_INTERVAL)
            while not self._commands.empty():
                ws, msg = self._commands.get_nowait()
                self._apply_command(ws, msg)
            now = loop.time()
            broadcasts = self.loop_core.advance_wall(now - last)
            last = now
            for msg in broadcasts:
                self._fanout(msg)

    # --------------------------------------------------------------- clients

    def _send(self, ws, msg: WireMessage) -> None:
        client = self._clients.get(ws)
        if client is None or client.closed:
            return
        try:
            client.queue.put_nowait(msg)
        except asyncio.QueueFull:
            client.closed = True  # slow client: drop rather than buffer unboundedly

    def _fanout(self, msg: WireMessage) -> None:
        for ws, client in list(self._clients.items()):
            if client.authenticated:
                self._send(ws, msg)

    def _apply_command(self, ws, msg: WireMessage) -> None:
        result = self.session.apply({"type": msg.type, **msg.payload})
        if "ok" in result:
            self._send(ws, protocol.ok_reply(msg.seq, result["ok"]))
        else:
            err = result["error"]
            self._send(ws, protocol.error_reply(msg.seq, err["code"], err["detail"]))

    async def _sender(self, ws, client: _Client) -> None:
        while not client.closed:
            msg = await client.queue.get()
            await ws.send(protocol.encode(msg))

    async def _handle_client(self, ws) -> None:
        client = _Client()
        self._clients[ws] = client
        sender = asyncio.create_task(self._sender(ws, client))
        try:
            async for raw in ws:
                try:
                    msg = protocol.decode(raw)
                except ProtocolError as exc:
                    self._send(ws, protocol.error_reply(getattr(exc, "seq", 0), exc.code, exc.detail))
                    continue
                if not client.authenticated:
                    if msg.type != "hello":
                        self._send(
                            ws,
                            protocol.error_reply(msg.seq, "unauthenticated", "hello required first"),
                        )
                        continue
                    supplied = msg.payload.get("token")
                    if supplied is not None and supplied != self.token:
                        self._send(ws, protocol.error_reply(msg.seq, "bad_token", "token mismatch"))
                        continue
                    client.authenticated = True
                    self._send(ws, protocol.ok_reply(msg.seq, {"token": self.token}))
                    for snap in self.loop_core.snapshot_messages():
                        self._send(ws, snap)
                    continue
                if msg.type == "hello":
                    self._send(ws, protocol.ok_reply(msg.seq, {"token": self.token}))
                    continue
                await self._commands.put((ws, msg))
        except ConnectionClosed:
            pass
        finally:
            client.closed = True
            sender.cancel()
            self._clients.pop(ws, None)
