"""Episode driver: sense -> run the controller -> act, with ASK in the loop.

The controller circuit is synthesized and lowered once per episode, then
re-run per step on a freshly prepared basis input (sensor bits set, all
other qubits zero), so measurement collapse never needs modeling. When the
controller raises ASK, the episode blocks until someone (a human over the
wire, or a policy here) picks one of the clear directions; the answer is
turned into a one-hot sensor word and pushed back through the same circuit.

Traces persist as JSONL, one record per line, and replay re-validates every
record against a freshly built controller plus the map-free kinematics.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import IO, Iterable

from .errors import (
    InvalidChoiceError,
    PolicyError,
    StateError,
    StructuralError,
    TraceError,
    ReplayMismatchError,
)
from .grid import (
    Action,
    GridMap,
    Heading,
    Pose,
    Terminal,
    apply_action,
    interpret,
    load_map,
    resolve_ask,
    sense,
)
from .synth import Direction, SensorWord, build_controller, evaluate, format_table_iv

DEFAULT_MAX_STEPS = 1000


@dataclass(frozen=True)
class AskRequest:
    """The controller wants a human choice among >= 2 clear directions."""

    step: int
    clear_directions: tuple[Direction, ...]
    word: SensorWord

    def __post_init__(self):
        if len(self.clear_directions) < 2:
            raise StructuralError("an ask needs at least two clear directions")
        if set(self.clear_directions) != set(self.word.clear_directions()):
            raise StructuralError("clear_directions must match the sensor word")

    @property
    def clear_letters(self) -> tuple[str, ...]:
        return tuple(d.value for d in self.clear_directions)


@dataclass(frozen=True)
class TraceRecord:
    """One executed step. ``pose`` is the pose before the action; the pose
    after is kept in memory but reconstructed (not persisted) on replay."""

    step: int
    pose: Pose
    sensors: str
    output: str
    action: Action
    ask_choice: Direction | None
    pose_after: Pose
    terminal: Terminal | None

    def to_json(self) -> dict:
        return {
            "step": self.step,
            "pose": {"x": self.pose.x, "y": self.pose.y, "heading": self.pose.heading.value},
            "sensors": self.sensors,
            "output": self.output,
            "action": self.action.value,
            "ask_choice": None if self.ask_choice is None else self.ask_choice.value,
            "terminal": None if self.terminal is None else self.terminal.value,
        }


@dataclass(frozen=True)
class EpisodeTrace:
    records: tuple[TraceRecord, ...]
    final_status: Terminal | None


class FirstClear:
    """Deterministic fallback policy: first clear direction in F,B,L,R order."""

    def choose(self, request: AskRequest) -> Direction:
        return request.clear_directions[0]


class Scripted:
    """Answers from a fixed list, consumed in order."""

    def __init__(self, directions: Iterable[Direction | str]):
        self.directions = tuple(
            d if isinstance(d, Direction) else Direction.from_letter(d) for d in directions
        )
        self._next = 0

    def choose(self, request: AskRequest) -> Direction:
        if self._next >= len(self.directions):
            raise PolicyError(f"scripted answers exhausted at step {request.step}")
        d = self.directions[self._next]
        self._next += 1
        return d


class Interactive:
    """Marker policy: asks surface to the caller; cannot auto-answer."""

    def choose(self, request: AskRequest) -> Direction:
        raise PolicyError("interactive policy cannot answer an ask by itself")


@dataclass
class EpisodeConfig:
    map_text: str
    max_steps: int = DEFAULT_MAX_STEPS
    ask_policy: FirstClear | Scripted | Interactive = field(default_factory=FirstClear)
    seed: int = 0

    def __post_init__(self):
        if self.max_steps < 0:
            raise StructuralError(f"max_steps must be >= 0, got {self.max_steps}")


class Episode:
    """One navigation session over a parsed map with its own controller."""

    def __init__(self, config: EpisodeConfig):
        self.config = config
        self.grid, self.pose = load_map(config.map_text)
        self.controller = build_controller(lowered=True)
        self.records: list[TraceRecord] = []
        self.pending: AskRequest | None = None
        self.status: Terminal | None = None
        if config.max_steps == 0:
            self.status = Terminal.STEP_LIMIT

    @property
    def running(self) -> bool:
        return self.status is None

    @property
    def step_index(self) -> int:
        return len(self.records)

    def trace(self) -> EpisodeTrace:
        return EpisodeTrace(records=tuple(self.records), final_status=self.status)

    def step(self) -> TraceRecord | AskRequest:
        """Sense and run the controller; execute the move or raise an ask."""
        if not self.running:
            raise StateError(f"episode is terminal ({self.status.value})")
        if self.pending is not None:
            raise StateError("episode is blocked on an ask; call answer()")
        word = sense(self.grid, self.pose)
        outcome = evaluate(self.controller, word)
        if outcome.ask:
            self.pending = AskRequest(
                step=self.step_index,
                clear_directions=word.clear_directions(),
                word=word,
            )
            return self.pending
        return self._execute(word, word, ask_choice=None)

    def answer(self, chosen: Direction | str) -> TraceRecord:
        """Resolve the pending ask; the move still comes out of the circuit."""
        if not self.running:
            raise StateError(f"episode is terminal ({self.status.value})")
        if self.pending is None:
            raise StateError("no ask is pending")
        if not isinstance(chosen, Direction):
            chosen = Direction.from_letter(chosen)
        if chosen not in self.pending.clear_directions:
            raise InvalidChoiceError(
                f"direction {chosen.value} is not clear; options: "
                f"{''.join(self.pending.clear_letters)}"
            )
        request = self.pending
        record = self._execute(request.word, resolve_ask(request.word, chosen), ask_choice=chosen)
        self.pending = None
        return record

    def _execute(self, sensed: SensorWord, effective: SensorWord, ask_choice: Direction | None) -> TraceRecord:
        outcome = evaluate(self.controller, effective)
        action = interpret(outcome)
        new_pose, terminal = apply_action(self.grid, self.pose, action)
        if terminal is None and self.step_index + 1 >= self.config.max_steps:
            terminal = Terminal.STEP_LIMIT
        record = TraceRecord(
            step=self.step_index,
            pose=self.pose,
            sensors=sensed.to_string(),
            output=format_table_iv(outcome),
            action=action,
            ask_choice=ask_choice,
            pose_after=new_pose,
            terminal=terminal,
        )
        self.records.append(record)
        self.pose = new_pose
        self.status = terminal
        return record


def run_to_completion(config: EpisodeConfig) -> EpisodeTrace:
    """Headless loop: steps until terminal, answering asks via the policy."""
    if isinstance(config.ask_policy, Interactive):
        raise PolicyError("run_to_completion needs a scripted or first-clear policy")
    episode = Episode(config)
    while episode.running:
        result = episode.step()
        if isinstance(result, AskRequest):
            episode.answer(config.ask_policy.choose(result))
    return episode.trace()


_RECORD_KEYS = ("step", "pose", "sensors", "output", "action", "ask_choice", "terminal")
_POSE_KEYS = ("x", "y", "heading")


def dump_trace(trace: EpisodeTrace) -> str:
    lines = [json.dumps(r.to_json(), separators=(",", ":")) for r in trace.records]
    return "".join(line + "\n" for line in lines)


def persist(trace: EpisodeTrace, sink: IO[str]) -> None:
    sink.write(dump_trace(trace))


def _record_from_json(obj: dict, lineno: int) -> TraceRecord:
    if not isinstance(obj, dict) or set(obj.keys()) != set(_RECORD_KEYS):
        raise TraceError(f"record must have exactly the keys {_RECORD_KEYS}", line=lineno)
    pose_obj = obj["pose"]
    if not isinstance(pose_obj, dict) or set(pose_obj.keys()) != set(_POSE_KEYS):
        raise TraceError(f"pose must have exactly the keys {_POSE_KEYS}", line=lineno)
    try:
        pose = Pose(int(pose_obj["x"]), int(pose_obj["y"]), Heading(pose_obj["heading"]))
        action = Action(obj["action"])
        ask_choice = None if obj["ask_choice"] is None else Direction(obj["ask_choice"])
        terminal = None if obj["terminal"] is None else Terminal(obj["terminal"])
        step = int(obj["step"])
        sensors = obj["sensors"]
        output = obj["output"]
        SensorWord.from_string(sensors)
        if not (isinstance(output, str) and len(output) == 6 and set(output) <= {"0", "1"}):
            raise ValueError(f"output must be 6 chars of 0/1, got {output!r}")
    except (ValueError, KeyError, TypeError) as exc:
        raise TraceError(str(exc), line=lineno) from exc
    return TraceRecord(
        step=step,
        pose=pose,
        sensors=sensors,
        output=output,
        action=action,
        ask_choice=ask_choice,
        pose_after=pose,  # placeholder; replay() recomputes the chain
        terminal=terminal,
    )


def _kinematic_pose_after(record: TraceRecord) -> Pose:
    pose, action = record.pose, record.action
    if action is Action.LIFT_OFF:
        return pose
    if action in (Action.FORWARD, Action.BACKWARD):
        heading = pose.heading
        along = heading if action is Action.FORWARD else heading.opposite()
    elif action is Action.TURN_LEFT:
        heading = pose.heading.ccw()
        along = heading
    else:
        heading = pose.heading.cw()
        along = heading
    dx, dy = along.vector
    return Pose(pose.x + dx, pose.y + dy, heading)


def replay(source: IO[str] | str, map_text: str | None = None) -> EpisodeTrace:
    """Load a JSONL trace and re-validate it end-to-end.

    Checks, per record: the schema; the step numbering; that a fresh
    controller maps the recorded sensors (through the recorded ask choice,
    if any) to exactly the recorded output and action; and that poses chain
    by the kinematics. With ``map_text`` the sensing itself is re-derived
    from the map, making tampering with sensor strings detectable too.
    """
    text = source if isinstance(source, str) else source.read()
    records: list[TraceRecord] = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise TraceError(f"bad JSON: {exc.msg}", line=lineno) from exc
        records.append(_record_from_json(obj, lineno))

    controller = build_controller(lowered=True)
    grid = start = None
    if map_text is not None:
        grid, start = load_map(map_text)
    expected_pose: Pose | None = start
    for i, record in enumerate(records):
        if record.step != i:
            raise ReplayMismatchError(f"record {i} carries step {record.step}")
        if record.terminal is not None and i != len(records) - 1:
            raise ReplayMismatchError(f"terminal record at step {i} is not last")
        word = SensorWord.from_string(record.sensors)
        if record.ask_choice is None:
            effective = word
        else:
            if not evaluate(controller, word).ask:
                raise ReplayMismatchError(
                    f"step {i}: controller does not ask on sensors {record.sensors}"
                )
            effective = resolve_ask(word, record.ask_choice)
        outcome = evaluate(controller, effective)
        expected_output = format_table_iv(outcome)
        if expected_output != record.output:
            raise ReplayMismatchError(
                f"step {i}: controller output {expected_output} != recorded {record.output}"
            )
        expected_action = interpret(outcome)
        if record.ask_choice is None and expected_action is Action.ASK:
            raise ReplayMismatchError(f"step {i}: controller asks but no choice was recorded")
        if expected_action is not record.action:
            raise ReplayMismatchError(
                f"step {i}: action {record.action.value} != controller's {expected_action.value}"
            )
        if expected_pose is not None and record.pose != expected_pose:
            raise ReplayMismatchError(
                f"step {i}: pose {record.pose} breaks the chain (expected {expected_pose})"
            )
        if grid is not None:
            resensed = sense(grid, record.pose)
            if resensed.to_string() != record.sensors:
                raise ReplayMismatchError(
                    f"step {i}: map senses {resensed.to_string()}, trace says {record.sensors}"
                )
        expected_pose = _kinematic_pose_after(record)
        records[i] = replace(record, pose_after=expected_pose)
    final = records[-1].terminal if records else None
    return EpisodeTrace(records=tuple(records), final_status=final)
