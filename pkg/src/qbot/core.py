"""Exact simulator for X-family circuits (X, CX, CCX and multi-controlled X).

Such circuits only permute computational basis states, which gives us two
execution paths: a full complex state vector, and a classical fast path that
threads one basis bitstring through the gate list. The fast path is what the
robot controller runs on; the state vector keeps it honest (norm, permutation
and cross-path equivalence are all tested properties).

Conventions, used everywhere in this package:

- qubit i is bit i of the basis index, so index j = sum(bit_i << i)
  (little endian);
- bitstrings are written register order, q0 first ("0100" = q1 set);
- a circuit flagged ``native`` may only contain gates with at most two
  controls; gates with three or more controls are "logical" and must be
  lowered (see :mod:`qbot.decompose`) before a native circuit will accept
  them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import CapacityError, NormalizationError, StructuralError

MAX_QUBITS = 24
DENSE_MAX_QUBITS = 12
PERM_MAX_QUBITS = 20

_MEASURE_NORM_TOL = 1e-9
_BASIS_PROB_TOL = 1e-12


@dataclass(frozen=True)
class Gate:
    """A NOT on ``target`` conditioned on every qubit in ``controls`` being 1.

    0 controls = X, 1 = CX, 2 = CCX; 3 or more is a logical multi-controlled
    X that native circuits reject.
    """

    controls: tuple[int, ...]
    target: int

    def __post_init__(self):
        object.__setattr__(self, "controls", tuple(self.controls))
        if len(set(self.controls)) != len(self.controls):
            raise StructuralError(f"duplicate control qubits in {self.controls}")
        if self.target in self.controls:
            raise StructuralError(f"target q{self.target} is also a control")
        for q in (*self.controls, self.target):
            if q < 0:
                raise StructuralError(f"negative qubit index {q}")

    @property
    def num_controls(self) -> int:
        return len(self.controls)

    @property
    def name(self) -> str:
        return {0: "x", 1: "cx", 2: "ccx"}.get(self.num_controls, "mcx")

    def qubits(self) -> tuple[int, ...]:
        return (*self.controls, self.target)


def x(target: int) -> Gate:
    return Gate((), target)


def cx(control: int, target: int) -> Gate:
    return Gate((control,), target)


def ccx(c1: int, c2: int, target: int) -> Gate:
    return Gate((c1, c2), target)


def mcx(controls: Iterable[int], target: int) -> Gate:
    return Gate(tuple(controls), target)


@dataclass(frozen=True)
class RegisterMap:
    """Role assignment for the robot controller's qubit register.

    ``sensors`` are S1..S4 = front, back, left, right (1 = path clear);
    ``ancillas`` is the pool used when lowering multi-controlled gates;
    ``ml``/``mr`` are the (A, B) qubit pairs of the left/right wheel motors;
    ``mu`` drives the propeller and ``ask`` flags a user query.
    """

    sensors: tuple[int, int, int, int]
    ancillas: tuple[int, ...]
    ml: tuple[int, int]
    mr: tuple[int, int]
    mu: int
    ask: int

    def __post_init__(self):
        object.__setattr__(self, "sensors", tuple(self.sensors))
        object.__setattr__(self, "ancillas", tuple(self.ancillas))
        object.__setattr__(self, "ml", tuple(self.ml))
        object.__setattr__(self, "mr", tuple(self.mr))
        if len(self.sensors) != 4 or len(self.ml) != 2 or len(self.mr) != 2:
            raise StructuralError("register map needs 4 sensors and 2+2 motor qubits")
        all_qubits = self.all_qubits()
        if len(all_qubits) != 4 + len(self.ancillas) + 2 + 2 + 1 + 1:
            raise StructuralError("register roles overlap")
        if min(all_qubits) < 0:
            raise StructuralError("negative qubit index in register map")

    def all_qubits(self) -> frozenset[int]:
        return frozenset((*self.sensors, *self.ancillas, *self.ml, *self.mr, self.mu, self.ask))

    @property
    def inputs(self) -> tuple[int, ...]:
        return self.sensors

    @property
    def outputs(self) -> tuple[int, ...]:
        """Output qubits in table order: ML_A, ML_B, MR_A, MR_B, MU, ASK."""
        return (self.ml[0], self.ml[1], self.mr[0], self.mr[1], self.mu, self.ask)

    @property
    def min_qubits(self) -> int:
        return max(self.all_qubits()) + 1

    @classmethod
    def robot_13q(cls) -> "RegisterMap":
        """The 13-qubit controller layout: q0-q3 sensors, q4-q6 ancillas,
        q7-q8 left motor, q9-q10 right motor, q11 propeller, q12 ask."""
        return cls(sensors=(0, 1, 2, 3), ancillas=(4, 5, 6), ml=(7, 8), mr=(9, 10), mu=11, ask=12)

    def to_json(self) -> dict:
        return {
            "sensors": list(self.sensors),
            "ancillas": list(self.ancillas),
            "ml": list(self.ml),
            "mr": list(self.mr),
            "mu": self.mu,
            "ask": self.ask,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RegisterMap":
        try:
            return cls(
                sensors=tuple(obj["sensors"]),
                ancillas=tuple(obj["ancillas"]),
                ml=tuple(obj["ml"]),
                mr=tuple(obj["mr"]),
                mu=int(obj["mu"]),
                ask=int(obj["ask"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise StructuralError(f"bad register map document: {exc}") from exc


class Circuit:
    """An ordered gate list over ``num_qubits`` qubits.

    ``registers`` optionally names qubit roles (needed for lowering and for
    actuator decoding). ``native=True`` asserts the <=2-control invariant on
    every gate added.
    """

    def __init__(
        self,
        num_qubits: int,
        gates: Iterable[Gate] = (),
        registers: RegisterMap | None = None,
        native: bool = False,
    ):
        if not 1 <= num_qubits <= MAX_QUBITS:
            raise CapacityError(f"qubit count {num_qubits} outside 1..{MAX_QUBITS}")
        if registers is not None and registers.min_qubits > num_qubits:
            raise StructuralError(
                f"register map needs {registers.min_qubits} qubits, circuit has {num_qubits}"
            )
        self.num_qubits = num_qubits
        self.registers = registers
        self.native = native
        self.gates: list[Gate] = []
        for g in gates:
            self.add(g)

    def add(self, gate: Gate) -> None:
        for q in gate.qubits():
            if q >= self.num_qubits:
                raise StructuralError(f"gate references q{q}, circuit has {self.num_qubits} qubits")
        if self.native and gate.num_controls > 2:
            raise StructuralError(f"native circuit rejects {gate.num_controls}-control gate")
        self.gates.append(gate)

    def extend(self, gates: Iterable[Gate]) -> None:
        for g in gates:
            self.add(g)

    @property
    def max_controls(self) -> int:
        return max((g.num_controls for g in self.gates), default=0)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Circuit):
            return NotImplemented
        return self.num_qubits == other.num_qubits and self.gates == other.gates

    def __repr__(self) -> str:
        return f"Circuit(num_qubits={self.num_qubits}, gates={len(self.gates)}, native={self.native})"


@dataclass
class StateVector:
    """2**n complex amplitudes; index j encodes qubit i as bit i of j."""

    amplitudes: np.ndarray

    @property
    def num_qubits(self) -> int:
        return int(self.amplitudes.shape[0]).bit_length() - 1

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


BasisState = tuple[int, ...]


def bits_to_index(bits: Iterable[int]) -> int:
    value = 0
    for i, b in enumerate(bits):
        if b:
            value |= 1 << i
    return value


def index_to_bits(index: int, n: int) -> BasisState:
    return tuple((index >> i) & 1 for i in range(n))


def bits_to_str(bits: Iterable[int]) -> str:
    """Register-order string, q0 first."""
    return "".join("1" if b else "0" for b in bits)


def str_to_bits(text: str) -> BasisState:
    if not text or any(ch not in "01" for ch in text):
        raise StructuralError(f"bitstring must be nonempty over 0/1, got {text!r}")
    return tuple(1 if ch == "1" else 0 for ch in text)


def new_state(n: int) -> StateVector:
    """The all-zeros state |0...0> on n qubits."""
    if not 1 <= n <= MAX_QUBITS:
        raise CapacityError(f"qubit count {n} outside 1..{MAX_QUBITS}")
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(amps)


def basis_state(bits: Iterable[int]) -> StateVector:
    bits = tuple(bits)
    state = new_state(len(bits))
    index = bits_to_index(bits)
    if index != 0:
        state.amplitudes[0] = 0.0
        state.amplitudes[index] = 1.0
    return state


def _check_gate_fits(gate: Gate, n: int) -> None:
    for q in gate.qubits():
        if q >= n:
            raise StructuralError(f"gate references q{q}, state has {n} qubits")


def _apply_inplace(amps: np.ndarray, gate: Gate, n: int) -> None:
    # Swap amplitude pairs (idx, idx ^ target_bit) wherever all controls are 1.
    idx = np.arange(amps.shape[0])
    mask = ((idx >> gate.target) & 1) == 0
    for c in gate.controls:
        mask &= ((idx >> c) & 1) == 1
    src = np.nonzero(mask)[0]
    dst = src | (1 << gate.target)
    amps[src], amps[dst] = amps[dst].copy(), amps[src].copy()


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """Apply one gate by its mathematical definition; returns a new state."""
    n = state.num_qubits
    _check_gate_fits(gate, n)
    amps = state.amplitudes.copy()
    _apply_inplace(amps, gate, n)
    return StateVector(amps)


def run_statevector(circuit: Circuit, input_bits: Iterable[int] | None = None) -> StateVector:
    """Run the whole circuit on |input_bits> (default |0...0>)."""
    if input_bits is None:
        state = new_state(circuit.num_qubits)
    else:
        bits = tuple(input_bits)
        if len(bits) != circuit.num_qubits:
            raise StructuralError(
                f"input has {len(bits)} bits, circuit has {circuit.num_qubits} qubits"
            )
        state = basis_state(bits)
    amps = state.amplitudes
    for gate in circuit.gates:
        _apply_inplace(amps, gate, circuit.num_qubits)
    return state


def _gate_masks(circuit: Circuit) -> list[tuple[int, int]]:
    masks = []
    for g in circuit.gates:
        cmask = 0
        for c in g.controls:
            cmask |= 1 << c
        masks.append((cmask, 1 << g.target))
    return masks


def run_basis(circuit: Circuit, input_bits: Iterable[int]) -> BasisState:
    """Classical fast path: thread a basis bitstring through the gate list.

    Flips the target of each gate whose controls are all 1; for X-family
    circuits this agrees exactly with state-vector execution.
    """
    bits = tuple(input_bits)
    if len(bits) != circuit.num_qubits:
        raise StructuralError(
            f"input has {len(bits)} bits, circuit has {circuit.num_qubits} qubits"
        )
    value = bits_to_index(bits)
    for cmask, tmask in _gate_masks(circuit):
        if value & cmask == cmask:
            value ^= tmask
    return index_to_bits(value, circuit.num_qubits)


def basis_permutation(circuit: Circuit) -> np.ndarray:
    """Output basis index for every input basis index, as one int array.

    Same semantics as run_basis, vectorized across all 2**n inputs.
    """
    n = circuit.num_qubits
    if n > PERM_MAX_QUBITS:
        raise CapacityError(f"permutation table for {n} qubits exceeds cap {PERM_MAX_QUBITS}")
    perm = np.arange(1 << n, dtype=np.int64)
    for cmask, tmask in _gate_masks(circuit):
        hit = (perm & cmask) == cmask
        perm[hit] ^= tmask
    return perm


def as_unitary(circuit: Circuit) -> np.ndarray:
    """Dense matrix whose column j is the circuit's output on basis state j.

    X-family circuits give an exact 0/1 permutation matrix. Kept on the
    state-vector path so it stays an independent oracle for the fast path.
    """
    n = circuit.num_qubits
    if n > DENSE_MAX_QUBITS:
        raise CapacityError(f"dense unitary for {n} qubits exceeds cap {DENSE_MAX_QUBITS}")
    dim = 1 << n
    matrix = np.zeros((dim, dim), dtype=np.complex128)
    for j in range(dim):
        matrix[:, j] = run_statevector(circuit, index_to_bits(j, n)).amplitudes
    return matrix


def measure_all(state: StateVector, seed: int = 0) -> BasisState:
    """Sample a basis index with probability |amplitude|^2.

    Deterministic given the seed; a basis state returns its own bits with
    probability 1 and does not consume randomness at all.
    """
    probs = np.abs(state.amplitudes) ** 2
    total = float(probs.sum())
    if abs(total - 1.0) > _MEASURE_NORM_TOL:
        raise NormalizationError(f"state norm^2 is {total:.12f}, not 1")
    top = int(np.argmax(probs))
    n = state.num_qubits
    if probs[top] >= 1.0 - _BASIS_PROB_TOL:
        return index_to_bits(top, n)
    rng = np.random.default_rng(seed)
    draw = rng.random()
    cumulative = np.cumsum(probs)
    index = int(np.searchsorted(cumulative, draw * total, side="right"))
    return index_to_bits(min(index, probs.shape[0] - 1), n)
