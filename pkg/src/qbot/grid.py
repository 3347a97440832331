"""Deterministic 2-D occupancy-grid world for the robot.

Coordinates: x grows rightward, y grows downward; out-of-bounds cells count
as obstacles (the world is not toroidal). Sensing is body-frame: front is
one cell along the heading, left is the heading rotated 90 degrees
counterclockwise, and so on.

A "turn" action rotates the heading and then advances one cell along the new
heading. The controller only ever commands a turn toward a sensed-clear
side, so the advance is safe; rotation alone would leave the robot
re-sensing the same junction forever.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import ContractViolationError, CorruptControllerError, InvalidChoiceError, MapError
from .synth import ControlOutcome, Direction, MotorState, SensorWord


class Heading(enum.Enum):
    N = "N"
    E = "E"
    S = "S"
    W = "W"

    @property
    def vector(self) -> tuple[int, int]:
        return {"N": (0, -1), "E": (1, 0), "S": (0, 1), "W": (-1, 0)}[self.value]

    def ccw(self) -> "Heading":
        order = (Heading.N, Heading.W, Heading.S, Heading.E)
        return order[(order.index(self) + 1) % 4]

    def cw(self) -> "Heading":
        order = (Heading.N, Heading.E, Heading.S, Heading.W)
        return order[(order.index(self) + 1) % 4]

    def opposite(self) -> "Heading":
        return self.ccw().ccw()


class Action(enum.Enum):
    FORWARD = "Forward"
    BACKWARD = "Backward"
    TURN_LEFT = "TurnLeft"
    TURN_RIGHT = "TurnRight"
    LIFT_OFF = "LiftOff"
    ASK = "Ask"


class Terminal(enum.Enum):
    AIRBORNE = "AIRBORNE"
    GOAL = "GOAL"
    STEP_LIMIT = "STEP_LIMIT"


@dataclass(frozen=True)
class Pose:
    x: int
    y: int
    heading: Heading


_ROBOT_CHARS = {"^": Heading.N, ">": Heading.E, "v": Heading.S, "<": Heading.W}
_HEADING_CHARS = {h: ch for ch, h in _ROBOT_CHARS.items()}


@dataclass(frozen=True)
class GridMap:
    """Rectangular occupancy grid; cells[y][x] True means obstacle."""

    width: int
    height: int
    cells: tuple[tuple[bool, ...], ...]
    goal: tuple[int, int] | None = None

    def in_bounds(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height

    def is_free(self, x: int, y: int) -> bool:
        return self.in_bounds(x, y) and not self.cells[y][x]


def load_map(text: str) -> tuple[GridMap, Pose]:
    """Parse a map document.

    Characters: ``#`` obstacle, ``.`` free, ``^ > v <`` the robot start with
    its heading, ``G`` the optional goal cell. Rows must be equal length and
    exactly one robot marker must be present.
    """
    rows = text.split("\n")
    while rows and rows[-1] == "":
        rows.pop()
    if not rows:
        raise MapError("empty map document", line=1)
    width = len(rows[0])
    if width == 0:
        raise MapError("empty first row", line=1)
    cells: list[tuple[bool, ...]] = []
    start: Pose | None = None
    goal: tuple[int, int] | None = None
    for y, row in enumerate(rows):
        if len(row) != width:
            raise MapError(f"row is {len(row)} cells wide, first row is {width}", line=y + 1)
        parsed = []
        for col, ch in enumerate(row):
            if ch == "#":
                parsed.append(True)
            elif ch == ".":
                parsed.append(False)
            elif ch == "G":
                if goal is not None:
                    raise MapError("more than one goal cell", line=y + 1, column=col + 1)
                goal = (col, y)
                parsed.append(False)
            elif ch in _ROBOT_CHARS:
                if start is not None:
                    raise MapError("more than one robot marker", line=y + 1, column=col + 1)
                start = Pose(col, y, _ROBOT_CHARS[ch])
                parsed.append(False)
            else:
                raise MapError(f"unknown character {ch!r}", line=y + 1, column=col + 1)
        cells.append(tuple(parsed))
    if start is None:
        raise MapError("no robot marker (^ > v <) in map", line=len(rows))
    return GridMap(width=width, height=len(rows), cells=tuple(cells), goal=goal), start


def render(gmap: GridMap, pose: Pose | None = None) -> str:
    """Serialize back to the document format; robot marker drawn at ``pose``."""
    lines = []
    for y in range(gmap.height):
        chars = []
        for x in range(gmap.width):
            if pose is not None and (x, y) == (pose.x, pose.y):
                chars.append(_HEADING_CHARS[pose.heading])
            elif gmap.cells[y][x]:
                chars.append("#")
            elif gmap.goal == (x, y):
                chars.append("G")
            else:
                chars.append(".")
        lines.append("".join(chars))
    return "\n".join(lines) + "\n"


def _neighbor(pose: Pose, heading: Heading) -> tuple[int, int]:
    dx, dy = heading.vector
    return pose.x + dx, pose.y + dy


def sense(gmap: GridMap, pose: Pose) -> SensorWord:
    """Body-frame clear bits for front, back, left, right (1 = clear)."""
    h = pose.heading
    sides = (h, h.opposite(), h.ccw(), h.cw())
    return SensorWord.from_bits([int(gmap.is_free(*_neighbor(pose, s))) for s in sides])


_MOTOR_ACTIONS = {
    (MotorState.FORWARD, MotorState.FORWARD): Action.FORWARD,
    (MotorState.BACKWARD, MotorState.BACKWARD): Action.BACKWARD,
    (MotorState.STOP, MotorState.FORWARD): Action.TURN_LEFT,
    (MotorState.FORWARD, MotorState.STOP): Action.TURN_RIGHT,
}


def interpret(outcome: ControlOutcome) -> Action:
    """Map decoded actuators to exactly one action; unmapped combinations
    mean the controller circuit is corrupt."""
    wheels_stopped = outcome.ml is MotorState.STOP and outcome.mr is MotorState.STOP
    if outcome.mu and not outcome.ask and wheels_stopped:
        return Action.LIFT_OFF
    if outcome.ask and not outcome.mu and wheels_stopped:
        return Action.ASK
    if not outcome.mu and not outcome.ask:
        action = _MOTOR_ACTIONS.get((outcome.ml, outcome.mr))
        if action is not None:
            return action
    raise CorruptControllerError(
        f"no action for ml={outcome.ml.name} mr={outcome.mr.name} "
        f"mu={int(outcome.mu)} ask={int(outcome.ask)}"
    )


def apply_action(gmap: GridMap, pose: Pose, action: Action) -> tuple[Pose, Terminal | None]:
    """Execute one grounded action; returns the new pose and a terminal
    status when the robot lifted off or entered the goal cell.

    The destination of a move must be free: actions come from truthful
    sensing, so a blocked destination is a broken invariant, not an event.
    """
    if action is Action.ASK:
        raise ContractViolationError("Ask must be resolved before motion")
    if action is Action.LIFT_OFF:
        return pose, Terminal.AIRBORNE
    if action is Action.FORWARD:
        heading = pose.heading
        step_along = heading
    elif action is Action.BACKWARD:
        heading = pose.heading
        step_along = heading.opposite()
    elif action is Action.TURN_LEFT:
        heading = pose.heading.ccw()
        step_along = heading
    else:  # TURN_RIGHT
        heading = pose.heading.cw()
        step_along = heading
    dx, dy = step_along.vector
    nx, ny = pose.x + dx, pose.y + dy
    if not gmap.is_free(nx, ny):
        raise ContractViolationError(
            f"{action.value} from ({pose.x},{pose.y}) heading {pose.heading.value} "
            f"lands on blocked cell ({nx},{ny})"
        )
    new_pose = Pose(nx, ny, heading)
    terminal = Terminal.GOAL if gmap.goal == (nx, ny) else None
    return new_pose, terminal


def resolve_ask(word: SensorWord, chosen: Direction) -> SensorWord:
    """One-hot sensor word for the user's chosen direction.

    The session re-runs the controller on this word, so the resulting move
    still comes out of the circuit rather than a classical shortcut.
    """
    if not word.is_clear(chosen):
        raise InvalidChoiceError(f"direction {chosen.value} is blocked (sensors {word.to_string()})")
    bits = [0, 0, 0, 0]
    bits[chosen.sensor_bit] = 1
    return SensorWord.from_bits(bits)
