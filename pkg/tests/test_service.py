import asyncio
import json
import socket
import threading

from qbot.service import ProtocolSession

TEE = "#####\n#G..#\n##^##\n#####\n"


def send(session: ProtocolSession, **message) -> list[dict]:
    return session.handle_line(json.dumps(message))


# --- protocol handler (no sockets) --------------------------------------------


def test_start_returns_snapshot():
    session = ProtocolSession()
    (state,) = send(session, type="start", map=TEE)
    assert state["type"] == "state"
    assert state["status"] == "RUNNING"
    assert state["map"]["rows"] == ["#####", "#G..#", "##.##", "#####"]
    assert state["map"]["goal"] == [1, 1]
    assert state["pose"] == {"x": 2, "y": 2, "heading": "N"}
    assert state["pending"] is None


def test_full_episode_over_protocol():
    session = ProtocolSession()
    send(session, type="start", map=TEE)
    (record,) = send(session, type="step")
    assert record["type"] == "record" and record["action"] == "Forward"
    (ask,) = send(session, type="step")
    assert ask == {"type": "ask", "step": 1, "clear": ["B", "L", "R"]}
    (blocked,) = send(session, type="answer", direction="F")
    assert blocked["type"] == "error" and blocked["code"] == "invalid_choice"
    record, terminal = send(session, type="answer", direction="L")
    assert record["action"] == "TurnLeft" and record["ask_choice"] == "L"
    assert terminal == {"type": "terminal", "status": "GOAL"}
    (err,) = send(session, type="step")
    assert err["code"] == "state"


def test_state_resync_reflects_pending_ask():
    session = ProtocolSession()
    send(session, type="start", map=TEE)
    send(session, type="step")
    send(session, type="step")
    (state,) = send(session, type="state")
    assert state["pending"] == {"step": 1, "clear": ["B", "L", "R"]}
    assert state["last_record"]["action"] == "Forward"


def test_step_before_start():
    session = ProtocolSession()
    (err,) = send(session, type="step")
    assert err["type"] == "error" and err["code"] == "state"


def test_bad_json_line():
    session = ProtocolSession()
    (err,) = session.handle_line("{nope")
    assert err["code"] == "protocol"


def test_unknown_type():
    session = ProtocolSession()
    (err,) = send(session, type="reboot")
    assert err["code"] == "protocol"


def test_bad_map_is_parse_error():
    session = ProtocolSession()
    (err,) = send(session, type="start", map="...\n")
    assert err["code"] == "parse"


def test_terminal_message_on_step_limit():
    session = ProtocolSession()
    send(session, type="start", map="#####\n#>..#\n#####\n", max_steps=1)
    record, terminal = send(session, type="step")
    assert record["terminal"] == "STEP_LIMIT"
    assert terminal == {"type": "terminal", "status": "STEP_LIMIT"}


# --- over a real socket ---------------------------------------------------------


class ServerThread:
    def __init__(self):
        self.loop = asyncio.new_event_loop()
        self.port = None
        self._ready = threading.Event()
        self.thread = threading.Thread(target=self._run, daemon=True)

    def _run(self):
        asyncio.set_event_loop(self.loop)
        server = self.loop.run_until_complete(
            asyncio.start_server(self._capture_handler(), "127.0.0.1", 0)
        )
        self.port = server.sockets[0].getsockname()[1]
        self._ready.set()
        try:
            self.loop.run_forever()
        finally:
            server.close()
            self.loop.run_until_complete(server.wait_closed())
            self.loop.close()

    def _capture_handler(self):
        from qbot.service import _handle_tcp

        return _handle_tcp

    def __enter__(self):
        self.thread.start()
        assert self._ready.wait(timeout=5)
        return self

    def __exit__(self, *exc):
        async def cancel_all():
            for task in asyncio.all_tasks():
                if task is not asyncio.current_task():
                    task.cancel()

        asyncio.run_coroutine_threadsafe(cancel_all(), self.loop).result(timeout=5)
        self.loop.call_soon_threadsafe(self.loop.stop)
        self.thread.join(timeout=5)


def test_episode_over_tcp():
    with ServerThread() as server:
        with socket.create_connection(("127.0.0.1", server.port), timeout=5) as conn:
            reader = conn.makefile("r", encoding="utf-8")

            def rpc(message, expect=1):
                conn.sendall((json.dumps(message) + "\n").encode())
                return [json.loads(reader.readline()) for _ in range(expect)]

            (state,) = rpc({"type": "start", "map": TEE})
            assert state["status"] == "RUNNING"
            (record,) = rpc({"type": "step"})
            assert record["action"] == "Forward"
            (ask,) = rpc({"type": "step"})
            assert ask["clear"] == ["B", "L", "R"]
            record, terminal = rpc({"type": "answer", "direction": "L"}, expect=2)
            assert terminal["status"] == "GOAL"
