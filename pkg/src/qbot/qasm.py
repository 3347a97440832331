"""Text import/export for circuits, OPENQASM 2.0 subset.

Exactly three statements are accepted besides the header: one ``qreg q[N];``
declaration and ``x``/``cx``/``ccx`` gate lines. Everything else is rejected
with a line number. Emission is canonical (single space after the mnemonic,
no space after commas, newline-terminated), so export -> import -> export is
byte-stable.
"""

from __future__ import annotations

import re

from .core import Circuit, Gate
from .errors import QasmError, StructuralError

HEADER = "OPENQASM 2.0;"

_QREG_RE = re.compile(r"^qreg\s+q\[(\d+)\]\s*;$")
_GATE_RE = re.compile(r"^(x|cx|ccx)\s+(.+?)\s*;$")
_ARG_RE = re.compile(r"^q\[(\d+)\]$")

_ARITY = {"x": 1, "cx": 2, "ccx": 3}


def emit(circuit: Circuit) -> str:
    """Canonical text for a circuit containing only x/cx/ccx gates."""
    lines = [HEADER, f"qreg q[{circuit.num_qubits}];"]
    for gate in circuit.gates:
        if gate.num_controls > 2:
            raise StructuralError(
                f"{gate.num_controls}-control gate has no text form; lower the circuit first"
            )
        args = ",".join(f"q[{q}]" for q in gate.qubits())
        lines.append(f"{gate.name} {args};")
    return "\n".join(lines) + "\n"


def parse(text: str) -> Circuit:
    """Parse the subset grammar; raises QasmError with a 1-based line number."""
    circuit: Circuit | None = None
    saw_header = False
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line:
            continue
        if not saw_header:
            if line != HEADER:
                raise QasmError(f"expected {HEADER!r}, got {line!r}", line=lineno)
            saw_header = True
            continue
        if circuit is None:
            m = _QREG_RE.match(line)
            if not m:
                raise QasmError(f"expected 'qreg q[N];', got {line!r}", line=lineno)
            circuit = Circuit(int(m.group(1)))
            continue
        m = _GATE_RE.match(line)
        if not m:
            raise QasmError(f"unsupported statement {line!r}", line=lineno)
        mnemonic, arg_text = m.group(1), m.group(2)
        qubits = []
        for part in arg_text.split(","):
            am = _ARG_RE.match(part.strip())
            if not am:
                raise QasmError(f"bad operand {part.strip()!r}", line=lineno)
            qubits.append(int(am.group(1)))
        if len(qubits) != _ARITY[mnemonic]:
            raise QasmError(
                f"{mnemonic} takes {_ARITY[mnemonic]} operand(s), got {len(qubits)}", line=lineno
            )
        try:
            circuit.add(Gate(tuple(qubits[:-1]), qubits[-1]))
        except StructuralError as exc:
            raise QasmError(str(exc), line=lineno) from exc
    if not saw_header:
        raise QasmError("empty document, expected header", line=1)
    if circuit is None:
        raise QasmError("missing 'qreg q[N];' declaration", line=1)
    return circuit
