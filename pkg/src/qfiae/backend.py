"""Kernel backend selection.

The hot loops (gate sweeps, reuploading-model evaluation) exist twice: as
numba-jitted kernels and as a pure-numpy fallback. The active path is
chosen once at import:

* ``QFIAE_BACKEND=numpy`` forces the fallback,
* ``QFIAE_BACKEND=numba`` requires numba and fails loudly if missing,
* unset: numba when importable, numpy otherwise.

``benchmarks/bench_backends.py`` compares the two paths head to head.
"""

import os

_requested = os.environ.get("QFIAE_BACKEND", "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise RuntimeError(
        f"QFIAE_BACKEND must be 'numba' or 'numpy', got {_requested!r}"
    )

if _requested == "numpy":
    from . import _kernels_numpy as _kernels

    _BACKEND = "numpy"
else:
    try:
        from . import _kernels_numba as _kernels

        _BACKEND = "numba"
    except ImportError:
        if _requested == "numba":
            raise
        from . import _kernels_numpy as _kernels

        _BACKEND = "numpy"


def active_backend():
    """Name of the kernel path in use: 'numba' or 'numpy'."""
    return _BACKEND


def apply_compiled(amps, compiled, reps=1):
    """Run a compiled gate list over ``amps`` in place, ``reps`` times."""
    kinds, targets, masks, angles = compiled
    return _kernels.apply_ops(amps, kinds, targets, masks, angles, reps)


def qnn_forward(params, xs):
    return _kernels.qnn_forward(params, xs)


def qnn_loss_grad(params, xs, ys):
    return _kernels.qnn_loss_grad(params, xs, ys)
