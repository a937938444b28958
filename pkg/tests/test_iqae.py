import math

import numpy as np
import pytest

import qfiae.iqae as iqae_module
from qfiae.grover import SineSquaredOracle
from qfiae.iqae import (
    IqaeConfig,
    ThetaInterval,
    confidence_update,
    find_next_k,
    round_budget,
    run_iqae,
)


def constant_oracle(a, n=4):
    """Oracle whose prepared amplitude is exactly ``a`` (constant integrand)."""
    return SineSquaredOracle.from_interval(0.0, math.asin(math.sqrt(a)), n, 0.0, 1.0)


def brute_force_next_k(k_current, interval, up_current):
    """Independent scan: collect every admissible power, return the largest."""
    width = interval.theta_hi - interval.theta_lo
    if width <= 0:
        return k_current, up_current
    best = None
    k = 2 * k_current
    while True:
        big_k = 4 * k + 2
        if big_k * width > math.pi + 1e-9:
            break
        lo = (big_k * interval.theta_lo) % (2 * math.pi)
        hi = lo + big_k * width
        if hi <= math.pi + 1e-9:
            best = (k, True)
        elif lo >= math.pi - 1e-9 and hi <= 2 * math.pi + 1e-9:
            best = (k, False)
        k += 1
    return best if best is not None else (k_current, up_current)


def test_config_validation():
    with pytest.raises(ValueError):
        IqaeConfig(epsilon=0.6, alpha=0.05, shots_per_round=10)
    with pytest.raises(ValueError):
        IqaeConfig(epsilon=0.01, alpha=1.5, shots_per_round=10)
    with pytest.raises(ValueError):
        IqaeConfig(epsilon=0.01, alpha=0.05, shots_per_round=0)
    with pytest.raises(ValueError):
        ThetaInterval(0.3, 0.2)
    with pytest.raises(ValueError):
        ThetaInterval(-0.1, 0.2)


def test_find_next_k_matches_brute_force(rng):
    for _ in range(300):
        lo = float(rng.uniform(0, math.pi / 2 - 1e-3))
        hi = lo + float(rng.uniform(1e-4, math.pi / 2 - lo))
        interval = ThetaInterval(lo, hi)
        k_cur = int(rng.integers(0, 6))
        up_cur = bool(rng.integers(2))
        assert find_next_k(k_cur, interval, up_cur) == brute_force_next_k(
            k_cur, interval, up_cur
        )


def test_find_next_k_narrow_interval():
    interval = ThetaInterval(0.1, 0.12)
    k, up = find_next_k(0, interval, True)
    assert k == brute_force_next_k(0, interval, True)[0]
    big_k = 4 * k + 2
    lo = (big_k * 0.1) % (2 * math.pi)
    hi = lo + big_k * 0.02
    assert hi <= math.pi + 1e-9 if up else lo >= math.pi - 1e-9


def test_find_next_k_uninformative_interval():
    # only K = 2 keeps [0, pi] containment for the full quarter-circle
    assert find_next_k(0, ThetaInterval(0.0, math.pi / 2), True) == (0, True)


def test_find_next_k_growth_constraint():
    interval = ThetaInterval(0.1, 0.1001)
    k, _ = find_next_k(3, interval, True)
    assert k == 3 or k >= 6


def test_find_next_k_degenerate_interval():
    assert find_next_k(2, ThetaInterval(0.3, 0.3), False) == (2, False)


def test_confidence_update_examples():
    a_lo, a_hi = confidence_update(0, 100, 0.05)
    assert a_lo == 0.0
    a_lo, a_hi = confidence_update(50, 100, 0.05)
    delta = 0.13581015157406195  # sqrt(ln(2/0.05) / 200)
    assert a_lo == pytest.approx(0.5 - delta, abs=1e-12)
    assert a_hi == pytest.approx(0.5 + delta, abs=1e-12)
    assert confidence_update(100, 100, 0.05)[1] == 1.0
    with pytest.raises(ValueError):
        confidence_update(5, 3, 0.05)


def test_round_budget():
    assert round_budget(0.01) == math.ceil(math.log2(math.pi / 0.08))


def test_zero_integrand():
    result = run_iqae(
        SineSquaredOracle.from_interval(0.0, 0.0, 4, 0.0, 1.0),
        IqaeConfig(0.01, 0.05, 1000),
        seed=5,
    )
    assert result.converged
    assert result.a_estimate <= 0.01
    assert result.half_width <= 0.01


def test_estimate_is_deterministic():
    oracle = constant_oracle(0.37)
    config = IqaeConfig(0.01, 0.05, 500)
    first = run_iqae(oracle, config, seed=99)
    second = run_iqae(oracle, config, seed=99)
    assert first == second


def test_k_schedule_grows_on_benchmark_amplitude():
    # trace on a = 0.3: powers strictly grow until termination
    oracle = constant_oracle(0.3)
    for seed in range(6):
        result = run_iqae(oracle, IqaeConfig(0.01, 0.05, 1000), seed=seed)
        ks = result.k_schedule
        assert all(b > a for a, b in zip(ks, ks[1:]))
        assert result.converged


def test_k_schedule_non_decreasing(rng):
    for _ in range(25):
        oracle = constant_oracle(float(rng.uniform(0.02, 0.98)))
        result = run_iqae(oracle, IqaeConfig(0.01, 0.05, 200), seed=int(rng.integers(1e6)))
        ks = result.k_schedule
        assert all(b >= a for a, b in zip(ks, ks[1:]))


def test_interval_width_monotone(monkeypatch):
    widths = []
    original = iqae_module._refine_interval

    def recording(interval, big_k, p_lo, p_hi, up):
        refined = original(interval, big_k, p_lo, p_hi, up)
        widths.append((refined or interval).width)
        return refined

    monkeypatch.setattr(iqae_module, "_refine_interval", recording)
    run_iqae(constant_oracle(0.42), IqaeConfig(0.005, 0.05, 300), seed=11)
    assert all(b <= a + 1e-15 for a, b in zip(widths, widths[1:]))


def test_half_amplitude_coverage_200_trials():
    oracle = constant_oracle(0.5)
    config = IqaeConfig(0.01, 0.05, 1000)
    hits = 0
    for seed in range(200):
        result = run_iqae(oracle, config, seed=seed)
        assert result.half_width <= 0.01 + 1e-12
        hits += abs(result.a_estimate - 0.5) <= 0.01
    assert hits >= 190  # >= 95% of 200


def test_query_scaling_sub_classical():
    oracle = constant_oracle(0.3)
    calls = {}
    for eps in (0.02, 0.002):
        calls[eps] = np.mean(
            [run_iqae(oracle, IqaeConfig(eps, 0.05, 1000), seed=s).oracle_calls
             for s in range(10)]
        )
    assert calls[0.002] <= 25 * calls[0.02]


def test_non_convergence_flag():
    # one round at k=0 cannot reach epsilon; force it via max_rounds=1
    result = run_iqae(constant_oracle(0.3), IqaeConfig(0.001, 0.05, 10, max_rounds=1), seed=0)
    assert not result.converged
    assert result.rounds == 1
    assert result.half_width > 0.001
