"""Dense statevector simulator: gates, circuits, measurement, depth metrics.

Conventions used throughout the package:

* Qubit 0 is the least-significant bit of the basis-state index, so basis
  state ``|j>`` assigns qubit q the bit ``(j >> q) & 1``.
* Gates are single-target with an arbitrary (possibly empty) control set;
  controls trigger on bit value 1.
* Depth accounting: every gate, multi-controlled included, adds 1 to each
  qubit it touches; circuit depth is the maximum per-qubit total. A layer
  of single-qubit gates on disjoint qubits therefore costs depth 1.

The simulator is dense and capped at ``MAX_QUBITS`` qubits; the
integration pipeline needs at most 5 (4 register + 1 ancilla).
"""

from dataclasses import dataclass

import numpy as np

from . import backend
from ._opcodes import OP_H, OP_PHASE, OP_RY, OP_RZ, OP_X, OP_Z

MAX_QUBITS = 24

_OPCODES = {
    "H": OP_H,
    "X": OP_X,
    "Z": OP_Z,
    "RY": OP_RY,
    "RZ": OP_RZ,
    "PHASE": OP_PHASE,
}
PARAMETRIC_KINDS = frozenset({"RY", "RZ", "PHASE"})


@dataclass(frozen=True)
class Gate:
    """One gate: kind in {H, X, Z, RY, RZ, PHASE}, single target, 0+ controls."""

    kind: str
    target: int
    controls: tuple = ()
    angle: float = 0.0

    def __post_init__(self):
        if self.kind not in _OPCODES:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.target < 0:
            raise ValueError("target must be a non-negative qubit index")
        ctrl = tuple(self.controls)
        object.__setattr__(self, "controls", ctrl)
        if len(set(ctrl)) != len(ctrl):
            raise ValueError("duplicate control qubits")
        if self.target in ctrl or any(c < 0 for c in ctrl):
            raise ValueError("controls must be non-negative and disjoint from target")
        if self.kind not in PARAMETRIC_KINDS and self.angle != 0.0:
            raise ValueError(f"{self.kind} takes no angle")

    def inverse(self):
        """H, X, Z are self-inverse; rotations and phases negate their angle."""
        if self.kind in PARAMETRIC_KINDS:
            return Gate(self.kind, self.target, self.controls, -self.angle)
        return self

    def qubits(self):
        return (self.target, *self.controls)


class Circuit:
    """Ordered gate list on a fixed register; immutable once constructed."""

    def __init__(self, num_qubits, gates=()):
        if not 1 <= num_qubits <= MAX_QUBITS:
            raise ValueError(f"num_qubits must be in [1, {MAX_QUBITS}]")
        gates = tuple(gates)
        for gate in gates:
            if any(q >= num_qubits for q in gate.qubits()):
                raise ValueError(
                    f"gate {gate} addresses a qubit outside the {num_qubits}-qubit register"
                )
        self.num_qubits = num_qubits
        self.gates = gates
        self._compiled = None

    def __len__(self):
        return len(self.gates)

    def inverse(self):
        """Structural inverse: reversed order, each gate inverted."""
        return Circuit(self.num_qubits, [g.inverse() for g in reversed(self.gates)])

    def then(self, other):
        """Concatenation: self first, then ``other`` on the same register."""
        if other.num_qubits != self.num_qubits:
            raise ValueError("register sizes differ")
        return Circuit(self.num_qubits, self.gates + other.gates)

    def compiled(self):
        """Flat opcode arrays consumed by the kernel backend (cached)."""
        if self._compiled is None:
            n = len(self.gates)
            kinds = np.empty(n, dtype=np.int64)
            targets = np.empty(n, dtype=np.int64)
            masks = np.empty(n, dtype=np.int64)
            angles = np.empty(n, dtype=np.float64)
            for i, g in enumerate(self.gates):
                kinds[i] = _OPCODES[g.kind]
                targets[i] = g.target
                mask = 0
                for c in g.controls:
                    mask |= 1 << c
                masks[i] = mask
                angles[i] = g.angle
            self._compiled = (kinds, targets, masks, angles)
        return self._compiled


@dataclass(frozen=True)
class DepthMetrics:
    gate_count: int
    depth: int


@dataclass
class StateVector:
    """``2**num_qubits`` complex amplitudes, normalised to unit length."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise ValueError(f"num_qubits must be in [1, {MAX_QUBITS}]")
        if amps.shape != (2**self.num_qubits,):
            raise ValueError(
                f"expected {2**self.num_qubits} amplitudes, got shape {amps.shape}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-6:
            raise ValueError(f"state is not normalised (norm {norm})")
        self.amplitudes = amps

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def copy(self):
        return StateVector(self.num_qubits, self.amplitudes.copy())


def new_zero_state(num_qubits):
    """The all-zeros computational basis state."""
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise ValueError(f"num_qubits must be in [1, {MAX_QUBITS}]")
    amps = np.zeros(2**num_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(num_qubits, amps)


def _check_indices(state, gate):
    if any(q >= state.num_qubits for q in gate.qubits()):
        raise ValueError(
            f"gate {gate} addresses a qubit outside the {state.num_qubits}-qubit state"
        )


def apply_gate(state, gate):
    """Apply one gate and return the resulting state (input untouched)."""
    _check_indices(state, gate)
    amps = state.amplitudes.copy()
    circuit = Circuit(state.num_qubits, (gate,))
    backend.apply_compiled(amps, circuit.compiled())
    return StateVector(state.num_qubits, amps)


def run_circuit(state, circuit, reps=1):
    """Apply a whole circuit ``reps`` times; returns a new state."""
    if circuit.num_qubits != state.num_qubits:
        raise ValueError("circuit and state register sizes differ")
    amps = state.amplitudes.copy()
    backend.apply_compiled(amps, circuit.compiled(), reps)
    return StateVector(state.num_qubits, amps)


def _marginal_one(amps, num_qubits, qubit):
    """Probability of reading bit 1 on ``qubit``; works on a raw buffer."""
    if not 0 <= qubit < num_qubits:
        raise ValueError(f"qubit {qubit} out of range")
    probs = amps.real**2 + amps.imag**2
    # reshape so the middle axis is the addressed bit (qubit 0 = LSB)
    grouped = probs.reshape(2 ** (num_qubits - qubit - 1), 2, 2**qubit)
    return float(grouped[:, 1, :].sum())


def expectation_z(state, qubit):
    """<Z> on one qubit: P(bit=0) - P(bit=1)."""
    p1 = _marginal_one(state.amplitudes, state.num_qubits, qubit)
    return 1.0 - 2.0 * p1


def ancilla_one_probability(state, qubit):
    """Exact marginal probability of measuring 1 on ``qubit``."""
    return _marginal_one(state.amplitudes, state.num_qubits, qubit)


def sample_ancilla(state, qubit, shots, seed):
    """Count of 1-outcomes over ``shots`` measurements of one qubit.

    Sampling is analytic: the exact marginal feeds a binomial draw, which
    is statistically identical to per-shot collapse and much faster.
    Deterministic for a fixed seed.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    p = ancilla_one_probability(state, qubit)
    rng = np.random.default_rng(seed)
    return int(rng.binomial(shots, min(max(p, 0.0), 1.0)))


def measure_depth(circuit):
    """Gate count and depth under the per-qubit-total convention."""
    per_qubit = np.zeros(circuit.num_qubits, dtype=np.int64)
    for gate in circuit.gates:
        for q in gate.qubits():
            per_qubit[q] += 1
    depth = int(per_qubit.max()) if len(circuit) else 0
    return DepthMetrics(gate_count=len(circuit), depth=depth)
