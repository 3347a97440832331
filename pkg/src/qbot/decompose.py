"""Lowering of multi-controlled NOT gates to a CCX/CX network.

The construction is the classic ancilla AND-chain: conjoin controls pairwise
into k-1 ancillas, flip the target off the last ancilla, then uncompute the
chain in mirror order. Ancillas must start at 0 and provably end at 0, so a
single pool can be reused across every lowered gate in a circuit.

For k controls (k >= 3) the plan costs exactly 2(k-1) CCX + 1 CX and k-1
ancillas; gates with k <= 2 pass through untouched.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import Circuit, Gate, ccx, cx, run_basis
from .errors import CapacityError, StructuralError

VERIFY_MAX_CONTROLS = 6


@dataclass(frozen=True)
class DecompositionPlan:
    """CCX/CX gate list equivalent to one k-controlled NOT.

    ``gates`` is a palindrome around the single target flip at position
    ``compute_prefix_len``; ``ancillas`` lists the k-1 pool qubits actually
    used (empty for k <= 2).
    """

    k: int
    controls: tuple[int, ...]
    target: int
    ancillas: tuple[int, ...]
    gates: tuple[Gate, ...]
    compute_prefix_len: int

    @property
    def ancillas_needed(self) -> int:
        return len(self.ancillas)


def decompose_mcx(
    k: int, controls: Sequence[int], target: int, ancillas: Sequence[int]
) -> DecompositionPlan:
    """Plan one k-controlled NOT over the given qubits.

    ``ancillas`` is a pool; the first max(0, k-1) entries are consumed.
    All involved qubits must be pairwise distinct.
    """
    controls = tuple(controls)
    ancillas = tuple(ancillas)
    if k != len(controls):
        raise StructuralError(f"k={k} but {len(controls)} controls given")
    needed = max(0, k - 1) if k >= 3 else 0
    if len(ancillas) < needed:
        raise CapacityError(f"{k}-control gate needs {needed} ancillas, pool has {len(ancillas)}")
    used = ancillas[:needed]
    touched = (*controls, target, *used)
    if len(set(touched)) != len(touched):
        raise StructuralError(f"controls/target/ancillas overlap: {touched}")

    if k <= 2:
        return DecompositionPlan(
            k=k,
            controls=controls,
            target=target,
            ancillas=(),
            gates=(Gate(controls, target),),
            compute_prefix_len=0,
        )

    compute = [ccx(controls[0], controls[1], used[0])]
    for i in range(k - 2):
        compute.append(ccx(used[i], controls[i + 2], used[i + 1]))
    gates = (*compute, cx(used[-1], target), *reversed(compute))
    return DecompositionPlan(
        k=k,
        controls=controls,
        target=target,
        ancillas=used,
        gates=gates,
        compute_prefix_len=len(compute),
    )


def lower_circuit(circuit: Circuit, pool: Iterable[int] | None = None) -> Circuit:
    """Rewrite every gate with 3+ controls through the ancilla chain.

    The pool defaults to the circuit's register-map ancillas and is reused
    across gates (each plan restores its ancillas to 0). Gates that are
    already native pass through in order.
    """
    if pool is not None:
        pool = tuple(pool)
    lowered = Circuit(circuit.num_qubits, registers=circuit.registers, native=True)
    for gate in circuit.gates:
        if gate.num_controls <= 2:
            lowered.add(gate)
            continue
        if pool is None:
            if circuit.registers is None:
                raise CapacityError(
                    f"{gate.num_controls}-control gate needs an ancilla pool; "
                    "circuit has no register map and none was given"
                )
            pool = circuit.registers.ancillas
        plan = decompose_mcx(gate.num_controls, gate.controls, gate.target, pool)
        lowered.extend(plan.gates)
    return lowered


@dataclass(frozen=True)
class EquivalenceCase:
    control_bits: tuple[int, ...]
    target_in: int
    target_out: int
    target_expected: int
    ancillas_clean: bool

    @property
    def ok(self) -> bool:
        return self.target_out == self.target_expected and self.ancillas_clean


@dataclass(frozen=True)
class EquivalenceReport:
    k: int
    cases: tuple[EquivalenceCase, ...]

    @property
    def passed(self) -> bool:
        return all(case.ok for case in self.cases)

    @property
    def first_counterexample(self) -> EquivalenceCase | None:
        for case in self.cases:
            if not case.ok:
                return case
        return None


def plan_circuit(k: int) -> Circuit:
    """Standalone lowered circuit for one k-controlled NOT.

    Layout: controls q0..q(k-1), ancillas next, target last.
    """
    controls = tuple(range(k))
    needed = max(0, k - 1) if k >= 3 else 0
    ancillas = tuple(range(k, k + needed))
    target = k + needed
    plan = decompose_mcx(k, controls, target, ancillas)
    return Circuit(target + 1, plan.gates, native=True)


def verify_equivalence(k: int) -> EquivalenceReport:
    """Sweep all 2**(k+1) (controls, target) inputs with ancillas at 0.

    Checks the lowered plan against the bare definition of a k-controlled
    NOT and that every ancilla reads 0 afterwards.
    """
    if k > VERIFY_MAX_CONTROLS:
        raise CapacityError(f"verification supports k <= {VERIFY_MAX_CONTROLS}, got {k}")
    circuit = plan_circuit(k)
    needed = max(0, k - 1) if k >= 3 else 0
    target = k + needed
    cases = []
    for pattern in range(1 << k):
        control_bits = tuple((pattern >> i) & 1 for i in range(k))
        for target_in in (0, 1):
            bits = [0] * circuit.num_qubits
            for i, b in enumerate(control_bits):
                bits[i] = b
            bits[target] = target_in
            out = run_basis(circuit, bits)
            expected = target_in ^ int(all(control_bits))
            cases.append(
                EquivalenceCase(
                    control_bits=control_bits,
                    target_in=target_in,
                    target_out=out[target],
                    target_expected=expected,
                    ancillas_clean=not any(out[q] for q in range(k, k + needed)),
                )
            )
    return EquivalenceReport(k=k, cases=tuple(cases))
