import numpy as np
import pytest

from qfiae.statevector import Circuit, Gate

GATE_POOL = ("H", "X", "Z", "RY", "RZ", "PHASE")


def random_circuit(rng, num_qubits, max_gates=20):
    """Random circuit mixing plain, rotated, and controlled gates."""
    gates = []
    for _ in range(int(rng.integers(1, max_gates + 1))):
        kind = GATE_POOL[int(rng.integers(len(GATE_POOL)))]
        target = int(rng.integers(num_qubits))
        controls = ()
        if num_qubits > 1 and rng.random() < 0.4:
            pool = [q for q in range(num_qubits) if q != target]
            count = int(rng.integers(1, min(len(pool), 2) + 1))
            controls = tuple(rng.choice(pool, size=count, replace=False).tolist())
        angle = float(rng.uniform(-np.pi, np.pi)) if kind in ("RY", "RZ", "PHASE") else 0.0
        gates.append(Gate(kind, target, controls, angle))
    return Circuit(num_qubits, gates)


def random_state_amplitudes(rng, num_qubits):
    amps = rng.normal(size=2**num_qubits) + 1j * rng.normal(size=2**num_qubits)
    return amps / np.linalg.norm(amps)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
