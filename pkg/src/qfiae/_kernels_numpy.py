"""Pure-numpy fallback kernels.

Same contracts as ``_kernels_numba``: in-place gate sweeps over a dense
amplitude vector and batched evaluation of the single-qubit reuploading
model. Vectorised over basis indices (gate sweeps) and over the sample
batch (model evaluation) so the fallback stays usable without a JIT.
"""

import numpy as np

from ._opcodes import OP_H, OP_PHASE, OP_RY, OP_RZ, OP_X, OP_Z

_INV_SQRT2 = 1.0 / np.sqrt(2.0)
_HALF_PI = 0.5 * np.pi


def _pair_indices(dim, target, mask):
    """Indices i0 (target bit 0) and i1 (target bit 1) with all control bits set."""
    tbit = 1 << target
    h = np.arange(dim >> 1)
    i0 = ((h >> target) << (target + 1)) | (h & (tbit - 1))
    if mask:
        i0 = i0[(i0 & mask) == mask]
    return i0, i0 | tbit


def apply_ops(amps, kinds, targets, masks, angles, reps=1):
    """Apply a compiled gate list to ``amps`` in place, ``reps`` times."""
    dim = amps.shape[0]
    for _ in range(reps):
        for g in range(kinds.shape[0]):
            kind = kinds[g]
            i0, i1 = _pair_indices(dim, int(targets[g]), int(masks[g]))
            if kind == OP_H:
                a0 = amps[i0].copy()
                amps[i0] = (a0 + amps[i1]) * _INV_SQRT2
                amps[i1] = (a0 - amps[i1]) * _INV_SQRT2
            elif kind == OP_X:
                a0 = amps[i0].copy()
                amps[i0] = amps[i1]
                amps[i1] = a0
            elif kind == OP_Z:
                amps[i1] *= -1.0
            elif kind == OP_RY:
                c = np.cos(0.5 * angles[g])
                s = np.sin(0.5 * angles[g])
                a0 = amps[i0].copy()
                amps[i0] = c * a0 - s * amps[i1]
                amps[i1] = s * a0 + c * amps[i1]
            elif kind == OP_RZ:
                p = np.exp(-0.5j * angles[g])
                amps[i0] *= p
                amps[i1] *= np.conj(p)
            elif kind == OP_PHASE:
                amps[i1] *= np.exp(1j * angles[g])
            else:
                raise ValueError(f"unknown opcode {kind}")
    return amps


def _block(a0, a1, t1, t2, t3):
    # trainable block: RZ(t1), RY(t2), RZ(t3) in circuit order
    p = np.exp(-0.5j * t1)
    a0 = a0 * p
    a1 = a1 * np.conj(p)
    c = np.cos(0.5 * t2)
    s = np.sin(0.5 * t2)
    a0, a1 = c * a0 - s * a1, s * a0 + c * a1
    p = np.exp(-0.5j * t3)
    return a0 * p, a1 * np.conj(p)


def qnn_forward(params, xs):
    """Z-expectation of the reuploading circuit for every x in the batch.

    ``params`` has shape (L+1, 3); block 0 is applied first, then L
    repetitions of encode-RZ(x) followed by the next trainable block.
    """
    xs = np.asarray(xs, dtype=np.float64)
    a0 = np.ones(xs.shape, dtype=np.complex128)
    a1 = np.zeros(xs.shape, dtype=np.complex128)
    a0, a1 = _block(a0, a1, params[0, 0], params[0, 1], params[0, 2])
    enc = np.exp(-0.5j * xs)
    enc_c = np.conj(enc)
    for l in range(1, params.shape[0]):
        a0 = a0 * enc
        a1 = a1 * enc_c
        a0, a1 = _block(a0, a1, params[l, 0], params[l, 1], params[l, 2])
    return (a0.real**2 + a0.imag**2) - (a1.real**2 + a1.imag**2)


def qnn_loss_grad(params, xs, ys):
    """Mean-squared loss and its parameter-shift gradient.

    Each rotation angle is shifted by +-pi/2 and the model re-evaluated;
    d<Z>/dtheta = (f(+) - f(-)) / 2 chains through the squared loss.
    """
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    residual = qnn_forward(params, xs) - ys
    grad = np.zeros_like(params)
    work = params.copy()
    for b in range(params.shape[0]):
        for c in range(3):
            orig = work[b, c]
            work[b, c] = orig + _HALF_PI
            f_plus = qnn_forward(work, xs)
            work[b, c] = orig - _HALF_PI
            f_minus = qnn_forward(work, xs)
            work[b, c] = orig
            # 2*residual * (f_plus - f_minus)/2; the factors of 2 cancel
            grad[b, c] = np.mean(residual * (f_plus - f_minus))
    return float(np.mean(residual**2)), grad
