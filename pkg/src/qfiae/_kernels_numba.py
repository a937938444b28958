"""Numba-jitted hot kernels.

Gate sweeps iterate over basis-index pairs for one target bit; the model
kernels run the full parameter-shift sweep inside compiled code. All
kernels are deterministic pure functions (RNG stays outside).
"""

import numpy as np
from numba import njit

from ._opcodes import OP_H, OP_PHASE, OP_RY, OP_RZ, OP_X, OP_Z

_INV_SQRT2 = 1.0 / np.sqrt(2.0)
_HALF_PI = 0.5 * np.pi


@njit(cache=True)
def apply_ops(amps, kinds, targets, masks, angles, reps):
    dim = amps.shape[0]
    half = dim >> 1
    for _ in range(reps):
        for g in range(kinds.shape[0]):
            kind = kinds[g]
            t = targets[g]
            mask = masks[g]
            tbit = 1 << t
            low = tbit - 1
            if kind == OP_H:
                for h in range(half):
                    i0 = ((h >> t) << (t + 1)) | (h & low)
                    if (i0 & mask) == mask:
                        i1 = i0 | tbit
                        a0 = amps[i0]
                        a1 = amps[i1]
                        amps[i0] = (a0 + a1) * _INV_SQRT2
                        amps[i1] = (a0 - a1) * _INV_SQRT2
            elif kind == OP_X:
                for h in range(half):
                    i0 = ((h >> t) << (t + 1)) | (h & low)
                    if (i0 & mask) == mask:
                        i1 = i0 | tbit
                        amps[i0], amps[i1] = amps[i1], amps[i0]
            elif kind == OP_Z:
                for h in range(half):
                    i0 = ((h >> t) << (t + 1)) | (h & low)
                    if (i0 & mask) == mask:
                        amps[i0 | tbit] = -amps[i0 | tbit]
            elif kind == OP_RY:
                c = np.cos(0.5 * angles[g])
                s = np.sin(0.5 * angles[g])
                for h in range(half):
                    i0 = ((h >> t) << (t + 1)) | (h & low)
                    if (i0 & mask) == mask:
                        i1 = i0 | tbit
                        a0 = amps[i0]
                        a1 = amps[i1]
                        amps[i0] = c * a0 - s * a1
                        amps[i1] = s * a0 + c * a1
            elif kind == OP_RZ:
                p = np.exp(-0.5j * angles[g])
                pc = np.conj(p)
                for h in range(half):
                    i0 = ((h >> t) << (t + 1)) | (h & low)
                    if (i0 & mask) == mask:
                        amps[i0] = amps[i0] * p
                        amps[i0 | tbit] = amps[i0 | tbit] * pc
            else:  # OP_PHASE
                p = np.exp(1j * angles[g])
                for h in range(half):
                    i0 = ((h >> t) << (t + 1)) | (h & low)
                    if (i0 & mask) == mask:
                        amps[i0 | tbit] = amps[i0 | tbit] * p
    return amps


@njit(cache=True)
def _qnn_z(params, x):
    a0 = 1.0 + 0.0j
    a1 = 0.0 + 0.0j
    # block 0
    p = np.exp(-0.5j * params[0, 0])
    a0 = a0 * p
    a1 = a1 * np.conj(p)
    c = np.cos(0.5 * params[0, 1])
    s = np.sin(0.5 * params[0, 1])
    a0, a1 = c * a0 - s * a1, s * a0 + c * a1
    p = np.exp(-0.5j * params[0, 2])
    a0 = a0 * p
    a1 = a1 * np.conj(p)
    enc = np.exp(-0.5j * x)
    enc_c = np.conj(enc)
    for l in range(1, params.shape[0]):
        a0 = a0 * enc
        a1 = a1 * enc_c
        p = np.exp(-0.5j * params[l, 0])
        a0 = a0 * p
        a1 = a1 * np.conj(p)
        c = np.cos(0.5 * params[l, 1])
        s = np.sin(0.5 * params[l, 1])
        a0, a1 = c * a0 - s * a1, s * a0 + c * a1
        p = np.exp(-0.5j * params[l, 2])
        a0 = a0 * p
        a1 = a1 * np.conj(p)
    return (a0.real * a0.real + a0.imag * a0.imag) - (
        a1.real * a1.real + a1.imag * a1.imag
    )


@njit(cache=True)
def qnn_forward(params, xs):
    out = np.empty(xs.shape[0], dtype=np.float64)
    for i in range(xs.shape[0]):
        out[i] = _qnn_z(params, xs[i])
    return out


@njit(cache=True)
def qnn_loss_grad(params, xs, ys):
    n = xs.shape[0]
    grad = np.zeros_like(params)
    work = params.copy()
    total = 0.0
    for i in range(n):
        r = _qnn_z(work, xs[i]) - ys[i]
        total += r * r
        for b in range(params.shape[0]):
            for c in range(3):
                orig = work[b, c]
                work[b, c] = orig + _HALF_PI
                f_plus = _qnn_z(work, xs[i])
                work[b, c] = orig - _HALF_PI
                f_minus = _qnn_z(work, xs[i])
                work[b, c] = orig
                grad[b, c] += r * (f_plus - f_minus)
    inv = 1.0 / n
    return total * inv, grad * inv
