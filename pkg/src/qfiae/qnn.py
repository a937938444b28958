"""Single-qubit data-reuploading model: evaluation, training, series extraction.

The circuit interleaves an encoding rotation with trainable blocks:

    block(theta_0), then L repetitions of [ RZ(x), block(theta_l) ]

where each trainable block is RZ(t1) RY(t2) RZ(t3) - three angles spanning
all of SU(2) up to phase - and the readout is the Z expectation. With L
encoding rotations the output is a real trigonometric polynomial in x of
degree exactly L with integer frequencies (base frequency 1), so sampling
2L+1 points over one period makes the discrete Fourier transform exact.
"""

from dataclasses import dataclass

import numpy as np

from . import backend
from .fourier import FourierSeries
from .statevector import Circuit, Gate, expectation_z, new_zero_state, run_circuit

_ADAM_BETA1 = 0.9
_ADAM_BETA2 = 0.999
_ADAM_EPS = 1e-8
# init spread, radians; near-identity starts reach the fit-quality target
# within the standard 100-epoch budget, wide uniform starts often do not
_INIT_SCALE = 0.1


@dataclass
class QnnModel:
    """L reuploading layers and (L+1) x 3 trainable angles."""

    num_layers: int
    params: np.ndarray

    def __post_init__(self):
        params = np.asarray(self.params, dtype=np.float64)
        if self.num_layers < 1:
            raise ValueError("need at least one layer")
        if params.shape != (self.num_layers + 1, 3):
            raise ValueError(
                f"expected parameter shape {(self.num_layers + 1, 3)}, got {params.shape}"
            )
        self.params = params


@dataclass(frozen=True)
class TrainingConfig:
    learning_rate: float = 0.05
    epochs: int = 100
    num_points: int = 200
    domain: tuple = (-1.0, 1.0)
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.epochs < 1 or self.num_points < 2:
            raise ValueError("need epochs >= 1 and num_points >= 2")
        if not self.domain[0] < self.domain[1]:
            raise ValueError("empty training domain")


def random_model(num_layers, seed):
    """Fresh model with angles drawn from N(0, _INIT_SCALE)."""
    rng = np.random.default_rng(seed)
    return QnnModel(
        num_layers, rng.normal(0.0, _INIT_SCALE, size=(num_layers + 1, 3))
    )


def model_forward(model, x):
    """Z expectation of the circuit at input x; always in [-1, 1]."""
    return float(backend.qnn_forward(model.params, np.array([x], dtype=np.float64))[0])


def model_forward_batch(model, xs):
    return backend.qnn_forward(model.params, np.asarray(xs, dtype=np.float64))


def build_qnn_circuit(model, x):
    """The same model as an explicit gate list (for depth metrics and as an
    independent cross-check of the batched kernels)."""
    gates = []

    def block(angles):
        gates.append(Gate("RZ", 0, angle=angles[0]))
        gates.append(Gate("RY", 0, angle=angles[1]))
        gates.append(Gate("RZ", 0, angle=angles[2]))

    block(model.params[0])
    for l in range(1, model.num_layers + 1):
        gates.append(Gate("RZ", 0, angle=float(x)))
        block(model.params[l])
    return Circuit(1, gates)


def model_forward_circuit(model, x):
    """Gate-by-gate evaluation through the generic simulator."""
    state = run_circuit(new_zero_state(1), build_qnn_circuit(model, x))
    return expectation_z(state, 0)


def loss(model, xs, targets):
    """Mean squared error of the model outputs against targets."""
    xs = np.asarray(xs, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if xs.shape != targets.shape or xs.size < 1:
        raise ValueError("xs and targets must be equal-length and non-empty")
    return float(np.mean((backend.qnn_forward(model.params, xs) - targets) ** 2))


def gradient(model, xs, targets):
    """Parameter-shift gradient of the loss, flattened block-major to 3(L+1)."""
    xs = np.asarray(xs, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if xs.shape != targets.shape or xs.size < 1:
        raise ValueError("xs and targets must be equal-length and non-empty")
    _, grad = backend.qnn_loss_grad(model.params, xs, targets)
    return grad.reshape(-1)


def training_grid(config):
    """Equispaced sample points including both domain endpoints."""
    return np.linspace(config.domain[0], config.domain[1], config.num_points)


def heldout_grid(config):
    """Evaluation grid offset by half a training step (never seen in training)."""
    xs = training_grid(config)
    return xs[:-1] + 0.5 * (xs[1] - xs[0])


def train(target, config, num_layers):
    """Fit the model to ``target`` with full-batch Adam.

    ``target`` must map the training grid into [-1, 1] (the model output
    is a Z expectation); callers integrate unnormalised functions by
    rescaling first. Returns the trained model and the per-epoch loss
    trace (loss after each update). Deterministic for a fixed seed.
    """
    xs = training_grid(config)
    ys = np.asarray(target(xs), dtype=np.float64)
    if ys.shape != xs.shape:  # target only defined point-wise
        ys = np.asarray([target(x) for x in xs], dtype=np.float64)
    if np.max(np.abs(ys)) > 1.0 + 1e-9:
        raise ValueError(
            "target exceeds [-1, 1] on the training grid; normalise it first"
        )

    model = random_model(num_layers, config.seed)
    params = model.params
    m = np.zeros_like(params)
    v = np.zeros_like(params)
    history = []
    for t in range(1, config.epochs + 1):
        _, grad = backend.qnn_loss_grad(params, xs, ys)
        m = _ADAM_BETA1 * m + (1.0 - _ADAM_BETA1) * grad
        v = _ADAM_BETA2 * v + (1.0 - _ADAM_BETA2) * grad**2
        m_hat = m / (1.0 - _ADAM_BETA1**t)
        v_hat = v / (1.0 - _ADAM_BETA2**t)
        params = params - config.learning_rate * m_hat / (np.sqrt(v_hat) + _ADAM_EPS)
        history.append(float(np.mean((backend.qnn_forward(params, xs) - ys) ** 2)))
    return QnnModel(num_layers, params), history


def r_squared(model, target, config):
    """Coefficient of determination on the held-out half-step grid."""
    xs = heldout_grid(config)
    ys = np.asarray([target(x) for x in xs], dtype=np.float64)
    pred = model_forward_batch(model, xs)
    ss_res = float(np.sum((ys - pred) ** 2))
    ss_tot = float(np.sum((ys - np.mean(ys)) ** 2))
    if ss_tot == 0.0:
        return 1.0 if ss_res == 0.0 else 0.0
    return 1.0 - ss_res / ss_tot


def extract_fourier(model):
    """Exact Fourier series of the model via a 2L+1 point DFT.

    The model is band-limited to degree L, so 2L+1 equispaced samples over
    one period determine every coefficient exactly. Coefficient map:
    c0 = c_0, a_n = 2 Re(c_n), b_n = -2 Im(c_n). Raises if the transform
    is not conjugate-symmetric (the output must be real).
    """
    num_samples = 2 * model.num_layers + 1
    ts = 2.0 * np.pi * np.arange(num_samples) / num_samples
    values = model_forward_batch(model, ts)
    coeffs = np.fft.fft(values) / num_samples  # c_w at w = 0..L, then -L..-1
    asym = np.max(np.abs(coeffs[1:] - np.conj(coeffs[1:][::-1])))
    if asym > 1e-9 or abs(coeffs[0].imag) > 1e-9:
        raise AssertionError("model output is not real: DFT lacks conjugate symmetry")
    positive = coeffs[1 : model.num_layers + 1]
    return FourierSeries(
        omega=1.0,
        c0=float(coeffs[0].real),
        cos_coeffs=2.0 * positive.real,
        sin_coeffs=-2.0 * positive.imag,
    )
