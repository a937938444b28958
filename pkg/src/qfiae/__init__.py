"""Fourier-decomposition quantum Monte Carlo integration on a dense
statevector simulator.

Pipeline: fit a 1-D function with a single-qubit data-reuploading circuit,
read off its exact Fourier series, estimate every trigonometric term with
iterative amplitude estimation, and recombine - plus a classical-quadrature
variant (FQMCI), a plain Monte Carlo baseline, and circuit depth accounting.
"""

from .backend import active_backend
from .fourier import FourierSeries, evaluate_series
from .grover import (
    GroverPair,
    SineSquaredOracle,
    build_grover_operator,
    build_grover_pair,
    build_payoff_rotation,
    build_state_preparation,
    build_uniform_loader,
    build_zero_reflection,
)
from .integrator import (
    IntegralReport,
    IntegralRequest,
    SineSquaredTerm,
    TrainingError,
    decompose_terms,
    depth_report,
    exact_reference,
    integrate_term,
    normalize_target,
    run_classical_mc,
    run_fqmci,
    run_qfiae,
)
from .iqae import (
    IqaeConfig,
    IqaeResult,
    ThetaInterval,
    confidence_update,
    find_next_k,
    run_iqae,
)
from .qnn import (
    QnnModel,
    TrainingConfig,
    extract_fourier,
    gradient,
    loss,
    model_forward,
    train,
)
from .statevector import (
    Circuit,
    DepthMetrics,
    Gate,
    StateVector,
    ancilla_one_probability,
    apply_gate,
    expectation_z,
    measure_depth,
    new_zero_state,
    run_circuit,
    sample_ancilla,
)

__version__ = "0.1.0"
