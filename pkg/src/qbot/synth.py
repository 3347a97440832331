"""Truth-table-to-circuit synthesis and actuator decoding for the robot.

The controller is a total function from 4 sensor bits (front, back, left,
right; 1 = clear) to 6 output bits (ML_A, ML_B, MR_A, MR_B, MU, ASK). Each
table row becomes one circuit segment: X gates on the input qubits whose row
bit is 0, one multi-controlled X per set output bit, then the mirror X layer.
A segment therefore fires exactly on its own input pattern, and output
qubits, which start at 0, collect a plain OR of minterms.

Built-in behavior table (one row per sensor pattern):

- no side clear        -> propeller on (lift off);
- exactly one clear    -> the unique move toward it (front/back: both wheels;
  left/right: one wheel forward, the other stopped);
- two or more clear    -> ASK, and nothing moves until the user picks.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import Circuit, Gate, RegisterMap, bits_to_str, run_basis, x
from .decompose import lower_circuit
from .errors import CorruptControllerError, StructuralError, TableFormatError


class Direction(enum.Enum):
    """Body-frame direction letters used by ask choices and traces."""

    F = "F"
    B = "B"
    L = "L"
    R = "R"

    @property
    def sensor_bit(self) -> int:
        return {"F": 0, "B": 1, "L": 2, "R": 3}[self.value]

    @classmethod
    def from_letter(cls, letter: str) -> "Direction":
        try:
            return cls(letter)
        except ValueError:
            raise StructuralError(f"unknown direction {letter!r}, expected F/B/L/R") from None


DIRECTIONS = (Direction.F, Direction.B, Direction.L, Direction.R)


@dataclass(frozen=True)
class SensorWord:
    """One reading of the four obstacle sensors; True means the path is clear."""

    s1: bool  # front
    s2: bool  # back
    s3: bool  # left
    s4: bool  # right

    @property
    def bits(self) -> tuple[int, int, int, int]:
        return (int(self.s1), int(self.s2), int(self.s3), int(self.s4))

    @property
    def popcount(self) -> int:
        return sum(self.bits)

    def to_string(self) -> str:
        return bits_to_str(self.bits)

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "SensorWord":
        if len(bits) != 4:
            raise StructuralError(f"sensor word needs 4 bits, got {len(bits)}")
        return cls(bool(bits[0]), bool(bits[1]), bool(bits[2]), bool(bits[3]))

    @classmethod
    def from_string(cls, text: str) -> "SensorWord":
        if len(text) != 4 or any(ch not in "01" for ch in text):
            raise StructuralError(f"sensor word must be 4 chars of 0/1, got {text!r}")
        return cls.from_bits([1 if ch == "1" else 0 for ch in text])

    def is_clear(self, direction: Direction) -> bool:
        return bool(self.bits[direction.sensor_bit])

    def clear_directions(self) -> tuple[Direction, ...]:
        return tuple(d for d in DIRECTIONS if self.is_clear(d))


class MotorState(enum.Enum):
    """Two-qubit wheel motor encoding; (A, B) = |10> forward, |01> backward."""

    STOP = (0, 0)
    FORWARD = (1, 0)
    BACKWARD = (0, 1)

    @property
    def bits(self) -> tuple[int, int]:
        return self.value

    @classmethod
    def from_bits(cls, a: int, b: int) -> "MotorState":
        try:
            return cls((int(a), int(b)))
        except ValueError:
            raise CorruptControllerError(f"motor qubits read |{a}{b}>, which no state encodes") from None


@dataclass(frozen=True)
class ControlOutcome:
    """Decoded actuator qubits: wheel motors, propeller flag, ask flag."""

    ml: MotorState
    mr: MotorState
    mu: bool
    ask: bool


@dataclass(frozen=True)
class TruthTable:
    """Total function {0,1}^m -> {0,1}^p.

    Row v holds the output for the input whose bit i equals bit i of v
    (input bit 0 = S1 first, matching register order).
    """

    m: int
    p: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.rows) != 1 << self.m:
            raise StructuralError(f"table needs {1 << self.m} rows, got {len(self.rows)}")
        for row in self.rows:
            if len(row) != self.p:
                raise StructuralError(f"row {row} is not {self.p} bits wide")

    def lookup(self, input_bits: Sequence[int]) -> tuple[int, ...]:
        if len(input_bits) != self.m:
            raise StructuralError(f"expected {self.m} input bits, got {len(input_bits)}")
        value = 0
        for i, b in enumerate(input_bits):
            if b:
                value |= 1 << i
        return self.rows[value]


# Output rows below are (ML_A, ML_B, MR_A, MR_B, MU, ASK).
_LIFT = (0, 0, 0, 0, 1, 0)
_ASK = (0, 0, 0, 0, 0, 1)
_SINGLE_CLEAR = {
    (1, 0, 0, 0): (1, 0, 1, 0, 0, 0),  # front: both wheels forward
    (0, 1, 0, 0): (0, 1, 0, 1, 0, 0),  # back: both wheels backward
    (0, 0, 1, 0): (0, 0, 1, 0, 0, 0),  # left: right wheel only
    (0, 0, 0, 1): (1, 0, 0, 0, 0, 0),  # right: left wheel only
}


def builtin_table() -> TruthTable:
    """The 16-row sensor-to-actuator table the robot ships with."""
    rows = []
    for v in range(16):
        bits = tuple((v >> i) & 1 for i in range(4))
        ones = sum(bits)
        if ones == 0:
            rows.append(_LIFT)
        elif ones == 1:
            rows.append(_SINGLE_CLEAR[bits])
        else:
            rows.append(_ASK)
    return TruthTable(m=4, p=6, rows=tuple(rows))


@dataclass(frozen=True)
class SynthLayout:
    """Qubit roles for synthesizing an arbitrary table (inputs/outputs/pool)."""

    inputs: tuple[int, ...]
    outputs: tuple[int, ...]
    ancillas: tuple[int, ...] = ()


def _segments(table: TruthTable, inputs, outputs):
    # One (row_value, gates) item per row with any output bit set.
    for v in range(1 << table.m):
        out = table.rows[v]
        if not any(out):
            continue
        wrap = [x(inputs[i]) for i in range(table.m) if not (v >> i) & 1]
        fires = [Gate(tuple(inputs), outputs[j]) for j in range(table.p) if out[j]]
        yield v, [*wrap, *fires, *wrap]


def synthesize(
    table: TruthTable,
    layout: RegisterMap | SynthLayout,
    omit_segments: Iterable[int] = (),
) -> Circuit:
    """Compile a table into its segment-per-row circuit (not yet lowered).

    Segments are emitted in ascending row order; rows whose output is all
    zero emit nothing. ``omit_segments`` drops segments by emitted position,
    a fault-injection hook for the verification command.
    """
    inputs, outputs = tuple(layout.inputs), tuple(layout.outputs)
    if len(inputs) != table.m or len(outputs) != table.p:
        raise StructuralError(
            f"layout provides {len(inputs)} inputs / {len(outputs)} outputs, "
            f"table needs {table.m} / {table.p}"
        )
    if len(set(inputs + outputs)) != len(inputs + outputs):
        raise StructuralError("layout input/output roles collide")
    omit = set(omit_segments)
    registers = layout if isinstance(layout, RegisterMap) else None
    width = max((*inputs, *outputs, *layout.ancillas)) + 1
    circuit = Circuit(width, registers=registers)
    for position, (_, gates) in enumerate(_segments(table, inputs, outputs)):
        if position in omit:
            continue
        circuit.extend(gates)
    return circuit


def build_controller(lowered: bool = True) -> Circuit:
    """The built-in 13-qubit robot controller, lowered to CCX/CX by default."""
    circuit = synthesize(builtin_table(), RegisterMap.robot_13q())
    return lower_circuit(circuit) if lowered else circuit


def evaluate(circuit: Circuit, word: SensorWord) -> ControlOutcome:
    """Run the controller on a sensor word and decode the actuator qubits.

    The basis input carries the sensor bits and zeros everywhere else, so
    ancillas and outputs start clean each decision.
    """
    registers = circuit.registers
    if registers is None:
        raise StructuralError("controller circuit carries no register map")
    bits = [0] * circuit.num_qubits
    for qubit, bit in zip(registers.sensors, word.bits):
        bits[qubit] = bit
    out = run_basis(circuit, bits)
    ml = MotorState.from_bits(out[registers.ml[0]], out[registers.ml[1]])
    mr = MotorState.from_bits(out[registers.mr[0]], out[registers.mr[1]])
    return ControlOutcome(ml=ml, mr=mr, mu=bool(out[registers.mu]), ask=bool(out[registers.ask]))


def format_table_iv(outcome: ControlOutcome) -> str:
    """Actuator readout as the 6-character string ASK MU MR_B MR_A ML_B ML_A."""
    ml_a, ml_b = outcome.ml.bits
    mr_a, mr_b = outcome.mr.bits
    return bits_to_str((int(outcome.ask), int(outcome.mu), mr_b, mr_a, ml_b, ml_a))


def load_table(text: str) -> TruthTable:
    """Parse the one-row-per-line table format: '<m bits> <p bits>', # comments."""
    entries: dict[int, tuple[int, ...]] = {}
    m = p = None
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise TableFormatError(f"expected '<input bits> <output bits>', got {line!r}", line=lineno)
        in_text, out_text = parts
        if any(ch not in "01" for ch in in_text + out_text):
            raise TableFormatError(f"non-binary digit in {line!r}", line=lineno)
        if m is None:
            m, p = len(in_text), len(out_text)
        elif len(in_text) != m or len(out_text) != p:
            raise TableFormatError(
                f"row width {len(in_text)}/{len(out_text)} differs from first row {m}/{p}",
                line=lineno,
            )
        value = 0
        for i, ch in enumerate(in_text):
            if ch == "1":
                value |= 1 << i
        if value in entries:
            raise TableFormatError(f"duplicate input {in_text}", line=lineno)
        entries[value] = tuple(1 if ch == "1" else 0 for ch in out_text)
    if m is None:
        raise TableFormatError("empty table document", line=1)
    missing = [v for v in range(1 << m) if v not in entries]
    if missing:
        raise TableFormatError(
            f"table is not total: {len(missing)} of {1 << m} inputs missing (first: "
            f"{bits_to_str((missing[0] >> i) & 1 for i in range(m))})"
        )
    return TruthTable(m=m, p=p, rows=tuple(entries[v] for v in range(1 << m)))


def dump_table(table: TruthTable) -> str:
    lines = []
    for v in range(1 << table.m):
        in_bits = bits_to_str((v >> i) & 1 for i in range(table.m))
        lines.append(f"{in_bits} {bits_to_str(table.rows[v])}")
    return "\n".join(lines) + "\n"
