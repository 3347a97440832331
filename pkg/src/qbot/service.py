"""Line-oriented JSON protocol for driving episodes remotely.

One JSON object per newline-terminated line, over a local TCP socket. Each
connection owns at most one episode (no sharing); messages are handled
strictly in arrival order.

Client -> server: {"type":"start","map":...,"max_steps":...}, {"type":"step"},
{"type":"answer","direction":"L"}, {"type":"state"}.
Server -> client: {"type":"state",...}, {"type":"record",...},
{"type":"ask","step":N,"clear":[...]}, {"type":"terminal","status":...},
{"type":"error","code":...,"message":...}.

An optional WebSocket listener carries the identical messages (one JSON
object per WS message) for browser clients, which cannot open raw sockets.
"""

from __future__ import annotations

import asyncio
import json

from .errors import (
    InvalidChoiceError,
    ParseError,
    PolicyError,
    QbotError,
    StateError,
    StructuralError,
)
from .grid import render
from .session import DEFAULT_MAX_STEPS, AskRequest, Episode, EpisodeConfig, Interactive, TraceRecord

DEFAULT_PORT = 8765


class ProtocolSession:
    """Transport-agnostic message handler for one client connection."""

    def __init__(self):
        self.episode: Episode | None = None

    def handle_line(self, line: str) -> list[dict]:
        try:
            message = json.loads(line)
        except json.JSONDecodeError as exc:
            return [_error("protocol", f"bad JSON: {exc.msg}")]
        if not isinstance(message, dict) or not isinstance(message.get("type"), str):
            return [_error("protocol", "message must be an object with a string 'type'")]
        try:
            return self._dispatch(message)
        except ParseError as exc:
            return [_error("parse", str(exc))]
        except InvalidChoiceError as exc:
            return [_error("invalid_choice", str(exc))]
        except (StateError, PolicyError) as exc:
            return [_error("state", str(exc))]
        except StructuralError as exc:
            return [_error("protocol", str(exc))]
        except QbotError as exc:
            return [_error("internal", str(exc))]

    def _dispatch(self, message: dict) -> list[dict]:
        kind = message["type"]
        if kind == "start":
            if not isinstance(message.get("map"), str):
                return [_error("protocol", "start needs a string 'map' field")]
            config = EpisodeConfig(
                map_text=message["map"],
                max_steps=int(message.get("max_steps", DEFAULT_MAX_STEPS)),
                ask_policy=Interactive(),
                seed=int(message.get("seed", 0)),
            )
            self.episode = Episode(config)
            return [self._snapshot()]
        if kind == "state":
            if self.episode is None:
                return [_error("state", "no episode started")]
            return [self._snapshot()]
        if kind == "step":
            if self.episode is None:
                return [_error("state", "no episode started")]
            result = self.episode.step()
            if isinstance(result, AskRequest):
                return [{"type": "ask", "step": result.step, "clear": list(result.clear_letters)}]
            return _record_messages(result)
        if kind == "answer":
            if self.episode is None:
                return [_error("state", "no episode started")]
            direction = message.get("direction")
            if not isinstance(direction, str):
                return [_error("protocol", "answer needs a string 'direction' field")]
            record = self.episode.answer(direction)
            return _record_messages(record)
        return [_error("protocol", f"unknown message type {kind!r}")]

    def _snapshot(self) -> dict:
        ep = self.episode
        rows = render(ep.grid).split("\n")[:-1]
        return {
            "type": "state",
            "status": "RUNNING" if ep.running else ep.status.value,
            "map": {
                "width": ep.grid.width,
                "height": ep.grid.height,
                "rows": rows,
                "goal": list(ep.grid.goal) if ep.grid.goal else None,
            },
            "pose": {"x": ep.pose.x, "y": ep.pose.y, "heading": ep.pose.heading.value},
            "step": ep.step_index,
            "max_steps": ep.config.max_steps,
            "pending": (
                {"step": ep.pending.step, "clear": list(ep.pending.clear_letters)}
                if ep.pending
                else None
            ),
            "last_record": ep.records[-1].to_json() if ep.records else None,
        }


def _error(code: str, message: str) -> dict:
    return {"type": "error", "code": code, "message": message}


def _record_messages(record: TraceRecord) -> list[dict]:
    messages = [{"type": "record", **record.to_json()}]
    if record.terminal is not None:
        messages.append({"type": "terminal", "status": record.terminal.value})
    return messages


async def _handle_tcp(reader: asyncio.StreamReader, writer: asyncio.StreamWriter) -> None:
    session = ProtocolSession()
    try:
        while True:
            raw = await reader.readline()
            if not raw:
                break
            line = raw.decode("utf-8", errors="replace").strip()
            if not line:
                continue
            for response in session.handle_line(line):
                writer.write((json.dumps(response, separators=(",", ":")) + "\n").encode())
            await writer.drain()
    except (ConnectionResetError, BrokenPipeError):
        pass
    finally:
        writer.close()


async def serve(host: str = "127.0.0.1", port: int = DEFAULT_PORT, ws_port: int | None = None) -> None:
    """Run the TCP listener (and optionally a WebSocket one) until cancelled."""
    server = await asyncio.start_server(_handle_tcp, host, port)
    bound = server.sockets[0].getsockname()
    print(f"listening on {bound[0]}:{bound[1]}", flush=True)
    ws_server = None
    if ws_port is not None:
        ws_server = await _serve_ws(host, ws_port)
    try:
        async with server:
            await server.serve_forever()
    finally:
        if ws_server is not None:
            ws_server.close()


async def _serve_ws(host: str, ws_port: int):
    try:
        import websockets
    except ImportError as exc:  # pragma: no cover - depends on the ws extra
        raise QbotError("WebSocket support needs the 'websockets' package (pip install qbot[ws])") from exc

    async def handle(conn):
        session = ProtocolSession()
        async for raw in conn:
            text = raw.decode() if isinstance(raw, bytes) else raw
            for line in text.splitlines():
                if not line.strip():
                    continue
                for response in session.handle_line(line):
                    await conn.send(json.dumps(response, separators=(",", ":")))

    server = await websockets.serve(handle, host, ws_port)
    bound = next(iter(server.sockets)).getsockname()
    print(f"websocket listening on {bound[0]}:{bound[1]}", flush=True)
    return server
