"""3x3 quaternionic matrices and vectors.

A matrix is a float array of shape (3, 3, 4), a vector one of shape (3, 4).
Matrices act on column vectors from the left and scalars act on vectors from
the right, so ``A (v q) = (A v) q``.

The complex adjoint writes ``A = A1 + A2 j`` with complex ``A1, A2`` and maps
it to the 6x6 complex block matrix ``[[A1, A2], [-conj(A2), conj(A1)]]``.
A vector ``v = v1 + v2 j`` corresponds to ``[v1; -conj(v2)]`` in C^6, which
turns ``A v`` into a complex matrix-vector product and ``v lambda`` (complex
lambda) into ``lambda`` times the complex vector.
"""
import numpy as np

from . import quat
from .errors import ConsistencyError, SingularMatrixError


def asmat(A):
    """Coerce to a (3, 3, 4) array; complex (3, 3) input is embedded."""
    arr = np.asarray(A)
    if np.iscomplexobj(arr) or arr.shape == (3, 3):
        return quat.from_complex(arr)
    arr = arr.astype(float)
    if arr.shape != (3, 3, 4):
        raise ValueError(f"expected shape (3, 3, 4), got {arr.shape}")
    return arr


def asvec(v):
    arr = np.asarray(v)
    if np.iscomplexobj(arr) or arr.shape == (3,):
        return quat.from_complex(arr)
    arr = arr.astype(float)
    if arr.shape[-2:] != (3, 4):
        raise ValueError(f"expected shape (3, 4), got {arr.shape}")
    return arr


def identity():
    return quat.from_complex(np.eye(3))


def diag(*entries):
    """Diagonal matrix from complex numbers or quaternion 4-arrays."""
    A = np.zeros((3, 3, 4))
    for i, e in enumerate(entries):
        A[i, i] = quat.from_complex(e) if np.ndim(e) == 0 else quat.asquat(e)
    return A


def mat_mul(A, B):
    return np.sum(quat.mul(A[:, :, None, :], B[None, :, :, :]), axis=1)


def mat_vec(A, v):
    """A v for a single vector (3, 4) or a batch (..., 3, 4)."""
    v = np.asarray(v, dtype=float)
    return np.sum(quat.mul(A, v[..., None, :, :]), axis=-2)


def split(A):
    """Return the complex parts ``(A1, A2)`` of ``A = A1 + A2 j``."""
    return quat.complex_split(asmat(A))


def phi_embed(A):
    A1, A2 = split(A)
    return np.block([[A1, A2], [-A2.conj(), A1.conj()]])


def phi_pullback(P):
    """Inverse of ``phi_embed`` read off the top block row."""
    P = np.asarray(P)
    return quat.from_complex(P[:3, :3], P[:3, 3:])


def vec_to_c6(v):
    c1, c2 = quat.complex_split(v)
    return np.concatenate([c1, -c2.conj()], axis=-1)


def c6_to_vec(u):
    u = np.asarray(u)
    return quat.from_complex(u[..., :3], -u[..., 3:].conj())


def det_h(A, residue_tol=1e-9):
    """det of the complex adjoint: real and nonnegative."""
    d = np.linalg.det(phi_embed(A))
    if abs(d.imag) > residue_tol * max(1.0, abs(d)):
        raise ConsistencyError(f"det of complex adjoint has imaginary part {d.imag:.3e}")
    return max(float(d.real), 0.0)


def inverse(A):
    P = phi_embed(A)
    s = np.linalg.svd(P, compute_uv=False)
    if s[-1] <= 1e-14 * s[0]:
        raise SingularMatrixError(det_h(A))
    return phi_pullback(np.linalg.inv(P))


def transpose(A):
    return np.swapaxes(asmat(A), 0, 1).copy()


def conj_transpose(A):
    return quat.conj(transpose(A))


def sup_norm(A):
    return float(np.max(quat.norm(A)))


def scale_real(A, r):
    return asmat(A) * float(r)


def normalize_to_sl(A):
    """Rescale by a positive real so that det_h = 1."""
    d = det_h(A)
    if d <= 0.0:
        raise SingularMatrixError(d)
    return scale_real(A, d ** (-1.0 / 6.0))


def power(A, n):
    """A^n by binary powering with sup-norm renormalization.

    Only the projective class is meaningful; the result has sup norm 1.
    """
    if n < 0:
        A, n = inverse(A), -n
    result = identity()
    base = A / sup_norm(A)
    while n:
        if n & 1:
            result = mat_mul(result, base)
            result /= sup_norm(result)
        n >>= 1
        if n:
            base = mat_mul(base, base)
            base /= sup_norm(base)
    return result


def jordan_block(lam, size):
    """Upper triangular Jordan block of the given size as a complex array."""
    J = np.eye(size, dtype=complex) * lam
    J += np.eye(size, k=1)
    return J


def block_diag(*blocks):
    n = sum(np.shape(b)[0] for b in blocks)
    out = np.zeros((n, n), dtype=complex)
    i = 0
    for b in blocks:
        b = np.atleast_2d(b)
        k = b.shape[0]
        out[i:i + k, i:i + k] = b
        i += k
    return out
