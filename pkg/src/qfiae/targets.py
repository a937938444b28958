"""Built-in integrand registry.

Each entry pairs a vectorised callable with its closed-form integral when
one exists; the benchmark integrand is ``1 + x**2`` whose integral over
[0, 1] is 4/3.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .fourier import FourierSeries


@dataclass(frozen=True)
class TargetSpec:
    fn: Callable
    exact_integral: Callable | None = None  # (x_lo, x_hi) -> float


TARGETS = {
    "one_plus_x_squared": TargetSpec(
        fn=lambda x: 1.0 + np.asarray(x, dtype=np.float64) ** 2,
        exact_integral=lambda lo, hi: (hi - lo) + (hi**3 - lo**3) / 3.0,
    ),
    "constant_one": TargetSpec(
        fn=lambda x: np.ones_like(np.asarray(x, dtype=np.float64)),
        exact_integral=lambda lo, hi: hi - lo,
    ),
    "constant_zero": TargetSpec(
        fn=lambda x: np.zeros_like(np.asarray(x, dtype=np.float64)),
        exact_integral=lambda lo, hi: 0.0,
    ),
    "sin_x": TargetSpec(
        fn=lambda x: np.sin(np.asarray(x, dtype=np.float64)),
        exact_integral=lambda lo, hi: np.cos(lo) - np.cos(hi),
    ),
}


def get_target(target_id):
    try:
        return TARGETS[target_id]
    except KeyError:
        raise ValueError(
            f"unknown target {target_id!r}; known: {sorted(TARGETS)}"
        ) from None


def one_plus_x_squared_series(degree):
    """Analytic Fourier series of 1 + x**2 on [-pi, pi):
    1 + pi^2/3 + sum_n 4*(-1)^n / n^2 * cos(n x)."""
    n = np.arange(1, degree + 1)
    return FourierSeries(
        omega=1.0,
        c0=1.0 + np.pi**2 / 3.0,
        cos_coeffs=4.0 * (-1.0) ** n / n**2,
        sin_coeffs=np.zeros(degree),
    )
