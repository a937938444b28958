"""Truncated real Fourier series: container and evaluation."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FourierSeries:
    """c0 + sum_n (a_n cos(n*omega*x) + b_n sin(n*omega*x)), n = 1..degree."""

    omega: float
    c0: float
    cos_coeffs: np.ndarray
    sin_coeffs: np.ndarray

    def __post_init__(self):
        cos_c = np.asarray(self.cos_coeffs, dtype=np.float64)
        sin_c = np.asarray(self.sin_coeffs, dtype=np.float64)
        if cos_c.ndim != 1 or cos_c.shape != sin_c.shape:
            raise ValueError("cosine and sine coefficient lists must match in length")
        object.__setattr__(self, "cos_coeffs", cos_c)
        object.__setattr__(self, "sin_coeffs", sin_c)

    @property
    def degree(self):
        return len(self.cos_coeffs)

    def scaled(self, factor):
        """The series of ``factor * f`` for this series of ``f``."""
        return FourierSeries(
            self.omega, factor * self.c0, factor * self.cos_coeffs, factor * self.sin_coeffs
        )


def evaluate_series(series, x):
    """Evaluate the truncated series at x (scalar or array, broadcasting)."""
    x = np.asarray(x, dtype=np.float64)
    n = np.arange(1, series.degree + 1)
    phases = np.multiply.outer(x, n * series.omega)
    out = (
        series.c0
        + np.cos(phases) @ series.cos_coeffs
        + np.sin(phases) @ series.sin_coeffs
    )
    return float(out) if out.ndim == 0 else out
