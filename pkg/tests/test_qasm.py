import pytest

from qbot import qasm
from qbot.core import Circuit, ccx, cx, mcx, x
from qbot.errors import QasmError, StructuralError


def test_emit_canonical_form():
    c = Circuit(3, [x(0), cx(0, 1), ccx(0, 1, 2)])
    assert qasm.emit(c) == (
        "OPENQASM 2.0;\n"
        "qreg q[3];\n"
        "x q[0];\n"
        "cx q[0],q[1];\n"
        "ccx q[0],q[1],q[2];\n"
    )


def test_round_trip_is_byte_stable():
    c = Circuit(4, [ccx(3, 1, 0), x(2), cx(2, 3)])
    text1 = qasm.emit(c)
    text2 = qasm.emit(qasm.parse(text1))
    assert text1 == text2


def test_parse_preserves_gate_order_and_operands():
    c = qasm.parse("OPENQASM 2.0;\nqreg q[4];\nccx q[3],q[1],q[0];\nx q[2];\n")
    assert c.num_qubits == 4
    assert c.gates == [ccx(3, 1, 0), x(2)]


def test_parse_tolerates_blank_lines_and_spacing():
    c = qasm.parse("OPENQASM 2.0;\n\nqreg q[2];\n\ncx q[0], q[1];\n")
    assert c.gates == [cx(0, 1)]


def test_emit_rejects_mcx():
    c = Circuit(5, [mcx([0, 1, 2], 4)])
    with pytest.raises(StructuralError):
        qasm.emit(c)


@pytest.mark.parametrize(
    "text,line",
    [
        ("", 1),
        ("OPENQASM 3.0;\nqreg q[2];\n", 1),
        ("OPENQASM 2.0;\nx q[0];\n", 2),  # gate before qreg
        ("OPENQASM 2.0;\nqreg r[2];\n", 2),  # register must be named q
        ('OPENQASM 2.0;\nqreg q[2];\ninclude "qelib1.inc";\n', 3),
        ("OPENQASM 2.0;\nqreg q[2];\nh q[0];\n", 3),
        ("OPENQASM 2.0;\nqreg q[2];\ncreg c[2];\n", 3),
        ("OPENQASM 2.0;\nqreg q[2];\nmeasure q[0] -> c[0];\n", 3),
        ("OPENQASM 2.0;\nqreg q[2];\ncx q[0];\n", 3),  # wrong arity
        ("OPENQASM 2.0;\nqreg q[2];\nx q[5];\n", 3),  # out of range
        ("OPENQASM 2.0;\nqreg q[2];\ncx q[0],q[0];\n", 3),  # duplicate operand
        ("OPENQASM 2.0;\nqreg q[2];\nx q[0]\n", 3),  # missing semicolon
    ],
)
def test_parse_rejections_carry_line_numbers(text, line):
    with pytest.raises(QasmError) as err:
        qasm.parse(text)
    assert err.value.line == line


def test_parse_missing_qreg():
    with pytest.raises(QasmError):
        qasm.parse("OPENQASM 2.0;\n")


def test_gibberish_rejected():
    with pytest.raises(QasmError):
        qasm.parse("not a circuit at all\n")
