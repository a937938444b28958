"""Iterative amplitude estimation without phase estimation.

A classically driven loop alternates between choosing a Grover power k
whose scaled confidence interval sits in a known half-plane, sampling the
amplified circuit, and tightening the angle interval via the identity
``sin^2(x) = (1 - cos(2x)) / 2``. Per-round confidence comes from a
two-sided Chernoff-Hoeffding bound with the failure budget split evenly
over the round budget T = ceil(log2(pi / (8*epsilon))).

Oracle-call accounting: one state preparation costs 1 query, one
application of the amplification operator costs 2 (it contains the
preparation and its inverse).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import backend
from .grover import build_grover_operator, build_state_preparation
from .statevector import _marginal_one

_TWO_PI = 2.0 * math.pi
# slack for half-plane containment checks; far below any statistical width
_ATOL = 1e-9

GROWTH_FACTOR = 2  # next k must be at least twice the current one


@dataclass(frozen=True)
class IqaeConfig:
    epsilon: float
    alpha: float
    shots_per_round: int
    max_rounds: int | None = None  # None: 10x the round budget

    def __post_init__(self):
        if not 0.0 < self.epsilon < 0.5:
            raise ValueError("epsilon must be in (0, 0.5)")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must be in (0, 1)")
        if self.shots_per_round < 1:
            raise ValueError("shots_per_round must be >= 1")
        if self.max_rounds is not None and self.max_rounds < 1:
            raise ValueError("max_rounds must be >= 1 when given")


@dataclass(frozen=True)
class ThetaInterval:
    """Running confidence interval on the amplitude angle, within [0, pi/2]."""

    theta_lo: float
    theta_hi: float

    def __post_init__(self):
        if not 0.0 <= self.theta_lo <= self.theta_hi <= 0.5 * math.pi + 1e-12:
            raise ValueError(
                f"invalid angle interval [{self.theta_lo}, {self.theta_hi}]"
            )

    @property
    def width(self):
        return self.theta_hi - self.theta_lo

    def amplitude_bounds(self):
        """Image under a = sin^2(theta), increasing on [0, pi/2]."""
        return math.sin(self.theta_lo) ** 2, math.sin(self.theta_hi) ** 2


@dataclass
class IqaeResult:
    a_estimate: float
    half_width: float
    oracle_calls: int
    rounds: int
    k_schedule: list = field(default_factory=list)
    converged: bool = True
    widened_rounds: int = 0  # rounds whose update was discarded (empty intersection)


def round_budget(epsilon):
    """Nominal number of rounds needed to reach half-width epsilon."""
    return max(1, math.ceil(math.log2(math.pi / (8.0 * epsilon))))


def find_next_k(k_current, interval, up_current):
    """Largest admissible Grover power for the current angle interval.

    A power k is admissible when K = 4k+2 maps the interval, modulo 2*pi,
    entirely into the upper half-plane [0, pi] or the lower one [pi, 2*pi]
    (so the cosine inversion is unambiguous), and k >= 2 * k_current.
    Returns (k_current, up_current) unchanged when no such power exists,
    including for a degenerate (zero-width) interval.
    """
    width = interval.width
    if width <= 0.0:
        return k_current, up_current
    # K * width <= pi is necessary for half-plane containment
    k_max = int((math.pi / width - 2.0) // 4.0)
    for k in range(k_max, GROWTH_FACTOR * k_current - 1, -1):
        big_k = 4 * k + 2
        lo = math.fmod(big_k * interval.theta_lo, _TWO_PI)
        hi = lo + big_k * width
        if hi <= math.pi + _ATOL:
            return k, True
        if lo >= math.pi - _ATOL and hi <= _TWO_PI + _ATOL:
            return k, False
    return k_current, up_current


def confidence_update(hits, total_shots, alpha_round):
    """Two-sided Chernoff-Hoeffding bound on a binomial success probability."""
    if not 0 <= hits <= total_shots:
        raise ValueError("hits must lie in [0, total_shots]")
    if not 0.0 < alpha_round < 1.0:
        raise ValueError("alpha_round must be in (0, 1)")
    p_hat = hits / total_shots
    delta = math.sqrt(math.log(2.0 / alpha_round) / (2.0 * total_shots))
    return max(0.0, p_hat - delta), min(1.0, p_hat + delta)


def _contained(big_k, interval, up):
    lo = math.fmod(big_k * interval.theta_lo, _TWO_PI)
    hi = lo + big_k * interval.width
    if up:
        return hi <= math.pi + _ATOL
    return lo >= math.pi - _ATOL and hi <= _TWO_PI + _ATOL


def _refine_interval(interval, big_k, p_lo, p_hi, up):
    """Intersect the round's measurement with the running interval.

    The bound on p = sin^2((2k+1) theta) becomes a bound on
    cos(K theta) = 1 - 2p with K = 4k+2; the known half-plane makes the
    inversion to K*theta mod 2*pi unambiguous. Whole turns are recovered
    from the running interval, then the piece is intersected with it.
    Returns None when the intersection is empty (a statistical accident
    the caller handles by keeping the previous interval).
    """
    cos_hi = min(1.0, max(-1.0, 1.0 - 2.0 * p_lo))
    cos_lo = min(1.0, max(-1.0, 1.0 - 2.0 * p_hi))
    if up:
        piece = (math.acos(cos_hi), math.acos(cos_lo))
    else:
        piece = (_TWO_PI - math.acos(cos_lo), _TWO_PI - math.acos(cos_hi))
    lo_abs = big_k * interval.theta_lo
    hi_abs = big_k * interval.theta_hi
    base = math.floor(lo_abs / _TWO_PI)
    best = None
    for turns in (base - 1, base, base + 1):
        cand_lo = max(lo_abs, turns * _TWO_PI + piece[0])
        cand_hi = min(hi_abs, turns * _TWO_PI + piece[1])
        if cand_hi >= cand_lo and (best is None or cand_hi - cand_lo > best[1] - best[0]):
            best = (cand_lo, cand_hi)
    if best is None:
        return None
    return ThetaInterval(best[0] / big_k, best[1] / big_k)


def run_iqae(oracle, config, seed):
    """Estimate the ancilla-1 amplitude of an oracle's prepared state.

    Terminates once the implied amplitude interval has width at most
    2*epsilon, or flags non-convergence after max_rounds. Deterministic
    for a fixed seed.
    """
    rng = np.random.default_rng(seed)
    budget = round_budget(config.epsilon)
    alpha_round = config.alpha / budget
    max_rounds = config.max_rounds if config.max_rounds is not None else 10 * budget

    prep = build_state_preparation(oracle).compiled()
    grover = build_grover_operator(oracle).compiled()
    num_qubits = oracle.num_qubits_n + 1
    ancilla = oracle.num_qubits_n
    amps = np.zeros(2**num_qubits, dtype=np.complex128)
    amps[0] = 1.0
    backend.apply_compiled(amps, prep)
    k_simulated = 0

    interval = ThetaInterval(0.0, 0.5 * math.pi)
    k, up = 0, True
    prev_k = None
    hits_acc = 0
    shots_acc = 0
    k_schedule = []
    oracle_calls = 0
    widened = 0
    converged = False

    while True:
        a_lo, a_hi = interval.amplitude_bounds()
        if a_hi - a_lo <= 2.0 * config.epsilon:
            converged = True
            break
        if len(k_schedule) >= max_rounds:
            break
        k, up = find_next_k(k, interval, up)
        big_k = 4 * k + 2
        if not _contained(big_k, interval, up):
            raise AssertionError(
                f"half-plane containment violated at k={k}"
            )  # pragma: no cover - guarded by construction
        k_schedule.append(k)
        if k > k_simulated:
            backend.apply_compiled(amps, grover, k - k_simulated)
            k_simulated = k
        p_true = _marginal_one(amps, num_qubits, ancilla)
        hits = int(rng.binomial(config.shots_per_round, min(max(p_true, 0.0), 1.0)))
        oracle_calls += config.shots_per_round * (2 * k + 1)
        if prev_k == k:
            # same power as last round: merge counts, nothing is discarded
            hits_acc += hits
            shots_acc += config.shots_per_round
        else:
            hits_acc, shots_acc = hits, config.shots_per_round
        prev_k = k
        p_lo, p_hi = confidence_update(hits_acc, shots_acc, alpha_round)
        refined = _refine_interval(interval, big_k, p_lo, p_hi, up)
        if refined is None:
            widened += 1
            continue
        interval = refined

    a_lo, a_hi = interval.amplitude_bounds()
    return IqaeResult(
        a_estimate=0.5 * (a_lo + a_hi),
        half_width=0.5 * (a_hi - a_lo),
        oracle_calls=oracle_calls,
        rounds=len(k_schedule),
        k_schedule=k_schedule,
        converged=converged,
        widened_rounds=widened,
    )
