"""Builders for the amplitude-estimation circuits.

The estimation register holds n qubits (indices 0..n-1); the payoff
ancilla is qubit n. The grid is a midpoint discretisation of the
integration interval: point j sits at ``x_min + (j + 1/2) * delta_x``,
which halves the leading quadrature bias of a left-endpoint grid.

State preparation loads the uniform distribution with a Hadamard layer
and writes ``sin(m*x_j + c)`` into the ancilla-1 amplitude with a bank of
RY rotations, so the ancilla-1 probability equals the grid average of
``sin^2(m*x + c)`` - the quantity the estimator targets.
"""

from dataclasses import dataclass

import numpy as np

from .statevector import Circuit, Gate


@dataclass(frozen=True)
class SineSquaredOracle:
    """Integrand ``sin^2(slope_m * x + offset_c)`` on a 2**n midpoint grid."""

    slope_m: float
    offset_c: float
    num_qubits_n: int
    x_min: float
    delta_x: float

    def __post_init__(self):
        if self.num_qubits_n < 1:
            raise ValueError("need at least one register qubit")
        if self.delta_x <= 0:
            raise ValueError("delta_x must be positive")

    @classmethod
    def from_interval(cls, slope_m, offset_c, num_qubits_n, x_lo, x_hi):
        if x_hi <= x_lo:
            raise ValueError("empty interval")
        delta = (x_hi - x_lo) / 2**num_qubits_n
        return cls(slope_m, offset_c, num_qubits_n, x_lo, delta)

    def grid(self):
        j = np.arange(2**self.num_qubits_n)
        return self.x_min + (j + 0.5) * self.delta_x

    def values(self):
        return np.sin(self.slope_m * self.grid() + self.offset_c) ** 2

    def exact_amplitude(self):
        """Direct grid average of the integrand (the brute-force reference)."""
        return float(self.values().mean())


def build_uniform_loader(num_qubits):
    """Hadamard on every register qubit: all 2**n amplitudes equal 2**(-n/2)."""
    return Circuit(num_qubits, [Gate("H", q) for q in range(num_qubits)])


def build_payoff_rotation(oracle):
    """RY bank writing sin(m*x_j + c) into the ancilla for each basis state.

    A base rotation fixes the grid origin; one controlled RY per register
    bit adds that bit's contribution to the rotation angle.
    """
    n = oracle.num_qubits_n
    anc = n
    base = 2.0 * (oracle.slope_m * (oracle.x_min + 0.5 * oracle.delta_x) + oracle.offset_c)
    gates = [Gate("RY", anc, angle=base)]
    for bit in range(n):
        step = 2.0 * oracle.slope_m * oracle.delta_x * 2**bit
        gates.append(Gate("RY", anc, controls=(bit,), angle=step))
    return Circuit(n + 1, gates)


def build_state_preparation(oracle):
    """Loader then payoff rotation on n+1 qubits (ancilla = qubit n)."""
    n = oracle.num_qubits_n
    loader = Circuit(n + 1, [Gate("H", q) for q in range(n)])
    return loader.then(build_payoff_rotation(oracle))


def build_zero_reflection(num_qubits):
    """Flips the sign of the all-zeros state and leaves the rest unchanged.

    Realised as a multi-controlled pi-phase sandwiched between X layers.
    """
    flip = [Gate("X", q) for q in range(num_qubits)]
    phase = Gate(
        "PHASE", num_qubits - 1, controls=tuple(range(num_qubits - 1)), angle=np.pi
    )
    return Circuit(num_qubits, [*flip, phase, *flip])


def build_grover_operator(oracle):
    """The amplification operator, applied as: good-state sign flip,
    inverse preparation, zero reflection, preparation.

    The textbook operator carries a global minus sign that no measurement
    can see; it is omitted.
    """
    n = oracle.num_qubits_n
    prep = build_state_preparation(oracle)
    good_flip = Circuit(n + 1, [Gate("Z", n)])
    return good_flip.then(prep.inverse()).then(build_zero_reflection(n + 1)).then(prep)


@dataclass(frozen=True)
class GroverPair:
    """State preparation and its amplification operator for one oracle."""

    state_prep: Circuit
    grover_op: Circuit


def build_grover_pair(oracle):
    return GroverPair(build_state_preparation(oracle), build_grover_operator(oracle))
