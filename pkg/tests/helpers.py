import random

from qbot.core import Circuit, Gate


def random_native_circuit(n: int, gate_count: int, rng: random.Random) -> Circuit:
    """Random X-family circuit with 0-2 controls per gate."""
    circuit = Circuit(n)
    for _ in range(gate_count):
        arity = rng.choice([1, 2, 3]) if n >= 3 else rng.randint(1, n)
        qubits = rng.sample(range(n), arity)
        circuit.add(Gate(tuple(qubits[:-1]), qubits[-1]))
    return circuit
