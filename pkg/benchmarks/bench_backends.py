"""Head-to-head timing of the numba kernels against the numpy fallback.

Covers the two hot paths: gate sweeps on the 5-qubit estimation register
(one amplification operator applied many times) and the full
parameter-shift training epoch of the reuploading model.

Usage: python benchmarks/bench_backends.py [--reps 400] [--epochs 5]
"""

import argparse
import importlib
import time

import numpy as np

from qfiae.grover import SineSquaredOracle, build_grover_operator, build_state_preparation
from qfiae.qnn import random_model, training_grid, TrainingConfig


def load_backends():
    backends = {"numpy": importlib.import_module("qfiae._kernels_numpy")}
    try:
        backends["numba"] = importlib.import_module("qfiae._kernels_numba")
    except ImportError:
        print("numba unavailable; benchmarking the fallback only")
    return backends


def time_gate_sweeps(kernels, reps):
    oracle = SineSquaredOracle.from_interval(0.5, 0.3, 4, 0.0, 1.0)
    prep = build_state_preparation(oracle).compiled()
    grover = build_grover_operator(oracle).compiled()
    amps = np.zeros(32, dtype=np.complex128)
    amps[0] = 1.0
    kernels.apply_ops(amps, *prep, 1)
    kernels.apply_ops(amps.copy(), *grover, 1)  # warm-up (JIT compile)
    start = time.perf_counter()
    kernels.apply_ops(amps, *grover, reps)
    elapsed = time.perf_counter() - start
    return elapsed, reps * 30  # 30 gates per amplification operator


def time_training_epochs(kernels, epochs):
    model = random_model(10, 1)
    xs = training_grid(TrainingConfig())
    ys = (1.0 + xs**2) / 2.0
    kernels.qnn_loss_grad(model.params, xs[:4], ys[:4])  # warm-up
    start = time.perf_counter()
    for _ in range(epochs):
        kernels.qnn_loss_grad(model.params, xs, ys)
    elapsed = time.perf_counter() - start
    return elapsed, epochs


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--reps", type=int, default=400, help="amplification applications")
    parser.add_argument("--epochs", type=int, default=5, help="training epochs to time")
    args = parser.parse_args()

    backends = load_backends()
    results = {}
    for name, kernels in backends.items():
        sweep_time, gates = time_gate_sweeps(kernels, args.reps)
        epoch_time, epochs = time_training_epochs(kernels, args.epochs)
        results[name] = (sweep_time, epoch_time)
        print(
            f"{name:>6}: {gates} gate applications in {sweep_time:.4f}s "
            f"({gates / sweep_time:,.0f} gates/s) | "
            f"{epochs} training epochs in {epoch_time:.4f}s "
            f"({epoch_time / epochs * 1e3:.1f} ms/epoch)"
        )
    if len(results) == 2:
        sweep_speedup = results["numpy"][0] / results["numba"][0]
        epoch_speedup = results["numpy"][1] / results["numba"][1]
        print(
            f"speedup (numba over numpy): gate sweeps {sweep_speedup:.1f}x, "
            f"training epochs {epoch_speedup:.1f}x"
        )


if __name__ == "__main__":
    main()
