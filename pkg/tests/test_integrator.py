import numpy as np
import pytest

from qfiae.fourier import FourierSeries, evaluate_series
from qfiae.integrator import (
    IntegralRequest,
    TrainingError,
    decompose_terms,
    depth_report,
    exact_reference,
    fourier_coefficients_quadrature,
    integrate_term,
    normalize_target,
    run_classical_mc,
    run_fqmci,
    run_qfiae,
)
from qfiae.iqae import IqaeConfig
from qfiae.qnn import TrainingConfig
from qfiae.targets import one_plus_x_squared_series


def midpoint_integral(series, interval, points=16):
    """Classical reference: midpoint-rule integral of a series."""
    lo, hi = interval
    xs = lo + (np.arange(points) + 0.5) * (hi - lo) / points
    return (hi - lo) * float(np.mean(evaluate_series(series, xs)))


def test_normalize_benchmark_target():
    scaled, scale = normalize_target(lambda x: 1.0 + np.asarray(x) ** 2, (-1, 1), 1025)
    assert scale == pytest.approx(2.0)
    assert float(scaled(1.0)) == pytest.approx(1.0)


def test_normalize_constant():
    scaled, scale = normalize_target(lambda x: 0.5 * np.ones_like(np.asarray(x)), (0, 1), 101)
    assert scale == pytest.approx(0.5)
    assert np.allclose(scaled(np.linspace(0, 1, 7)), 1.0)


def test_normalize_sine():
    scaled, scale = normalize_target(np.sin, (-np.pi, np.pi), 1025)
    assert scale == pytest.approx(1.0, abs=1e-12)


def test_normalize_zero_function():
    scaled, scale = normalize_target(lambda x: np.zeros_like(np.asarray(x)), (0, 1), 11)
    assert scale == 1.0
    assert np.all(scaled(np.linspace(0, 1, 5)) == 0.0)


def test_decompose_pointwise_identity(rng):
    series = FourierSeries(
        1.0, 0.3, np.array([0.7, -0.2, 0.05]), np.array([-0.4, 0.1, 0.3])
    )
    interval = (0.2, 1.7)
    length = interval[1] - interval[0]
    constant, terms = decompose_terms(series, interval)
    assert constant == pytest.approx(series.c0 * length, abs=1e-14)
    assert len(terms) == 6
    xs = rng.uniform(-3, 3, 100)
    for n in range(1, 4):
        cos_term = terms[n - 1]
        recon = cos_term.weight * np.sin(cos_term.slope_m * xs + cos_term.offset_c) ** 2
        recon += cos_term.affine_bias
        assert np.allclose(recon, series.cos_coeffs[n - 1] * np.cos(n * xs) * length, atol=1e-12)
        sin_term = terms[3 + n - 1]
        recon = sin_term.weight * np.sin(sin_term.slope_m * xs + sin_term.offset_c) ** 2
        recon += sin_term.affine_bias
        assert np.allclose(recon, series.sin_coeffs[n - 1] * np.sin(n * xs) * length, atol=1e-12)


def test_decompose_constant_only_series():
    series = FourierSeries(1.0, 1.0, np.zeros(0), np.zeros(0))
    constant, terms = decompose_terms(series, (0.0, 1.0))
    assert constant == pytest.approx(1.0)
    assert terms == []


def test_decompose_degree_ten_gives_twenty_terms():
    constant, terms = decompose_terms(one_plus_x_squared_series(10), (0.0, 1.0))
    assert len(terms) == 20


def test_integrate_term_zero_weight_short_circuits():
    from qfiae.integrator import SineSquaredTerm

    term = SineSquaredTerm(weight=0.0, slope_m=0.5, offset_c=0.0, affine_bias=0.25)
    contribution, result = integrate_term(
        term, (0.0, 1.0), 4, IqaeConfig(0.01, 0.05, 100), seed=1
    )
    assert contribution == 0.25
    assert result.oracle_calls == 0 and result.rounds == 0


def test_integrate_term_infinite_shots_matches_brute_force():
    # first cosine term of the analytic benchmark series
    _, terms = decompose_terms(one_plus_x_squared_series(10), (0.0, 1.0))
    term = terms[0]
    contribution, result = integrate_term(
        term, (0.0, 1.0), 4, IqaeConfig(0.01, 0.05, 100), seed=1, infinite_shots=True
    )
    xs = (np.arange(16) + 0.5) / 16
    brute = float(np.mean(-4.0 * np.cos(xs)))  # a_1 = -4, interval length 1
    assert contribution == pytest.approx(brute, abs=1e-10)
    assert result.oracle_calls == 0


def test_integrate_term_coverage():
    _, terms = decompose_terms(one_plus_x_squared_series(10), (0.0, 1.0))
    term = terms[0]
    xs = (np.arange(16) + 0.5) / 16
    brute = float(np.mean(-4.0 * np.cos(xs)))
    config = IqaeConfig(0.01, 0.05, 1000)
    hits = 0
    for seed in range(100):
        contribution, _ = integrate_term(term, (0.0, 1.0), 4, config, seed=seed)
        hits += abs(contribution - brute) <= abs(term.weight) * config.epsilon
    assert hits >= 95


def _series_request(series, **kwargs):
    defaults = dict(
        target=series,
        interval=(0.0, 1.0),
        n_fourier=series.degree,
        n_qubits=4,
        iqae_config=IqaeConfig(0.01, 0.05, 1000),
        method="qfiae",
        master_seed=5,
    )
    defaults.update(kwargs)
    return IntegralRequest(**defaults)


def test_infinite_shots_equals_classical_midpoint():
    series = one_plus_x_squared_series(10)
    report = run_qfiae(_series_request(series, infinite_shots=True))
    assert report.i_estimate == pytest.approx(
        midpoint_integral(series, (0.0, 1.0)), abs=1e-9
    )
    assert report.error_bar == 0.0
    assert report.total_oracle_calls == 0


def test_in_class_series_matches_analytic_integral():
    # a pure first-harmonic target: the only errors left are the 16-point
    # grid bias and shot noise, both inside the propagated error bar
    series = FourierSeries(1.0, 0.6, np.array([0.3]), np.array([0.0]))
    analytic = 0.6 * 1.0 + 0.3 * np.sin(1.0)  # integral over [0, 1]
    hits = 0
    for seed in range(20):
        report = run_qfiae(_series_request(series, master_seed=seed))
        hits += abs(report.i_estimate - analytic) <= report.error_bar + 1e-3
    assert hits >= 18


def test_linearity_in_infinite_shots_mode():
    series = FourierSeries(1.0, 0.4, np.array([0.8, -0.3]), np.array([0.2, 0.0]))
    base = run_qfiae(_series_request(series, infinite_shots=True)).i_estimate
    tripled = run_qfiae(
        _series_request(series.scaled(3.0), infinite_shots=True)
    ).i_estimate
    assert tripled == pytest.approx(3.0 * base, abs=1e-12)


def test_qfiae_end_to_end_consistency_with_trained_model():
    # with the estimator replaced by exact amplitudes, the pipeline must
    # equal the classical midpoint integral of whatever series it extracted
    from qfiae.integrator import NORMALIZE_GRID
    from qfiae.qnn import extract_fourier, train
    from qfiae.rng import spawn_seeds

    request = IntegralRequest(
        target="one_plus_x_squared",
        interval=(0.0, 1.0),
        n_fourier=5,
        n_qubits=4,
        method="qfiae",
        train_config=TrainingConfig(epochs=40),
        master_seed=31,
        infinite_shots=True,
    )
    report = run_qfiae(request)
    # reproduce the extracted series independently
    scaled, scale = normalize_target(
        lambda x: 1.0 + np.asarray(x) ** 2, (-1.0, 1.0), NORMALIZE_GRID
    )
    train_seed = spawn_seeds(31, 1)[0]
    model, _ = train(scaled, TrainingConfig(epochs=40, seed=train_seed), 5)
    series = extract_fourier(model)
    assert report.i_estimate == pytest.approx(
        scale * midpoint_integral(series, (0.0, 1.0)), abs=1e-9
    )


def test_qfiae_training_failure_raises():
    request = IntegralRequest(
        target="one_plus_x_squared",
        interval=(0.0, 1.0),
        n_fourier=5,
        method="qfiae",
        train_config=TrainingConfig(epochs=2),
        master_seed=1,
        loss_ceiling=1e-9,
    )
    with pytest.raises(TrainingError) as info:
        run_qfiae(request)
    assert len(info.value.loss_history) == 2


def test_fqmci_quadrature_matches_analytic_coefficients():
    scaled, scale = normalize_target(
        lambda x: 1.0 + np.asarray(x) ** 2, (-1.0, 1.0), 1025
    )
    series = fourier_coefficients_quadrature(scaled, 10)
    n = np.arange(1, 11)
    assert scale * series.c0 == pytest.approx(1.0 + np.pi**2 / 3.0, abs=1e-6)
    assert np.allclose(scale * series.cos_coeffs, 4.0 * (-1.0) ** n / n**2, atol=1e-6)
    assert np.max(np.abs(series.sin_coeffs)) < 1e-12


def test_fqmci_constant_target_needs_no_estimation():
    request = IntegralRequest(
        target="constant_one",
        interval=(0.0, 1.0),
        n_fourier=5,
        method="fqmci",
        master_seed=2,
    )
    report = run_fqmci(request)
    assert report.total_oracle_calls == 0
    assert report.i_estimate == pytest.approx(1.0, abs=1e-9)


def test_classical_mc_constant():
    request = IntegralRequest(
        target="constant_one", interval=(0.0, 1.0), method="classical_mc", master_seed=3
    )
    report = run_classical_mc(request, 1000)
    assert report.i_estimate == pytest.approx(1.0, abs=1e-12)
    assert report.error_bar == pytest.approx(0.0, abs=1e-12)


def test_classical_mc_benchmark():
    request = IntegralRequest(
        target="one_plus_x_squared",
        interval=(0.0, 1.0),
        method="classical_mc",
        master_seed=4,
    )
    report = run_classical_mc(request, 10**6)
    assert abs(report.i_estimate - 4.0 / 3.0) <= 4 * report.error_bar


def test_classical_mc_rmse_scaling():
    request = lambda seed: IntegralRequest(
        target="one_plus_x_squared",
        interval=(0.0, 1.0),
        method="classical_mc",
        master_seed=seed,
    )

    def rmse(n):
        errors = [
            run_classical_mc(request(seed), n).i_estimate - 4.0 / 3.0
            for seed in range(100)
        ]
        return float(np.sqrt(np.mean(np.square(errors))))

    ratio = rmse(10**3) / rmse(10**5)
    assert 10 * 0.8 <= ratio <= 10 * 1.2  # 1/sqrt(n) within 20%


def test_exact_reference():
    assert exact_reference("one_plus_x_squared", (0.0, 1.0)) == pytest.approx(4.0 / 3.0)
    assert exact_reference("one_plus_x_squared", (-1.0, 1.0)) == pytest.approx(8.0 / 3.0)
    assert exact_reference("constant_one", (2.0, 5.5)) == pytest.approx(3.5)
    with pytest.raises(ValueError):
        exact_reference("no_such_target", (0.0, 1.0))


def test_depth_report_values():
    text = depth_report(10, 9, 4)
    nominal = next(l for l in text.splitlines() if l.startswith("nominal"))
    measured = next(l for l in text.splitlines() if l.startswith("measured"))
    assert "43" in nominal.split() and "112" in nominal.split()
    assert "43" in measured.split()


def test_depth_report_formula_cases():
    assert "23" in depth_report(5, 9, 4).splitlines()[2].split()  # 3 + 5*4
    nominal_k0 = depth_report(10, 0, 4).splitlines()[2].split()
    assert nominal_k0[-1] == "4"  # k=0 leaves just the preparation depth


def test_request_validation():
    with pytest.raises(ValueError):
        IntegralRequest(target="one_plus_x_squared", interval=(1.0, 0.0))
    with pytest.raises(ValueError):
        IntegralRequest(target="one_plus_x_squared", interval=(0.0, 1.0), method="nope")
    with pytest.raises(ValueError):
        IntegralRequest(target="one_plus_x_squared", interval=(0.0, 1.0), n_fourier=0)
    with pytest.raises(ValueError):
        run_classical_mc(
            IntegralRequest(
                target="one_plus_x_squared", interval=(0.0, 1.0), method="classical_mc"
            ),
            0,
        )


def test_seed_splitting_is_stable():
    from qfiae.rng import spawn_seeds

    first = spawn_seeds(123, 5)
    second = spawn_seeds(123, 5)
    assert first == second
    assert len(set(first)) == 5
    assert spawn_seeds(124, 5) != first
