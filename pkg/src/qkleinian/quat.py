"""Quaternion arithmetic.

Quaternions are float arrays whose last axis holds ``(w, x, y, z)`` for
``w + x i + y j + z k``. Every function broadcasts over leading axes.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


def asquat(a):
    arr = np.asarray(a, dtype=float)
    if arr.shape[-1:] != (4,):
        raise ValueError(f"expected trailing axis of length 4, got shape {arr.shape}")
    return arr


def mul(a, b):
    """Hamilton product."""
    a = asquat(a)
    b = asquat(b)
    aw, ax, ay, az = np.moveaxis(a, -1, 0)
    bw, bx, by, bz = np.moveaxis(b, -1, 0)
    return np.stack(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ],
        axis=-1,
    )


def conj(a):
    a = asquat(a)
    return a * np.array([1.0, -1.0, -1.0, -1.0])


def norm(a):
    return np.linalg.norm(asquat(a), axis=-1)


def inverse(a):
    a = asquat(a)
    n2 = np.sum(a * a, axis=-1)
    if np.any(n2 == 0.0):
        raise DomainError("zero quaternion has no inverse")
    return conj(a) / n2[..., None]


def complex_split(a):
    """Return ``(c1, c2)`` with ``a = c1 + c2 j``."""
    a = asquat(a)
    return a[..., 0] + 1j * a[..., 1], a[..., 2] + 1j * a[..., 3]


def from_complex(c1, c2=0.0):
    c1 = np.asarray(c1, dtype=complex)
    c2 = np.asarray(c2, dtype=complex)
    c1, c2 = np.broadcast_arrays(c1, c2)
    return np.stack([c1.real, c1.imag, c2.real, c2.imag], axis=-1)


def is_complex(a, tol=1e-12):
    """True when the j and k parts vanish relative to the norm."""
    a = asquat(a)
    scale = np.maximum(norm(a), 1.0)
    return np.hypot(a[..., 2], a[..., 3]) <= tol * scale


def exp_i(turns):
    """The unit complex number e^{2 pi i t} as a quaternion."""
    t = 2.0 * np.pi * np.asarray(turns, dtype=float)
    return from_complex(np.cos(t) + 1j * np.sin(t))


@dataclass(frozen=True)
class Quaternion:
    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, a):
        w, x, y, z = (float(c) for c in asquat(a))
        return cls(w, x, y, z)

    @property
    def array(self):
        return np.array([self.w, self.x, self.y, self.z])

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion.from_array(mul(self.array, other.array))
        return Quaternion.from_array(self.array * float(other))

    def __rmul__(self, other):
        return Quaternion.from_array(self.array * float(other))

    def __add__(self, other):
        return Quaternion.from_array(self.array + other.array)

    def __sub__(self, other):
        return Quaternion.from_array(self.array - other.array)

    def __neg__(self):
        return Quaternion.from_array(-self.array)

    def conj(self):
        return Quaternion.from_array(conj(self.array))

    def norm(self):
        return float(norm(self.array))

    def inverse(self):
        return Quaternion.from_array(inverse(self.array))

    def complex_split(self):
        c1, c2 = complex_split(self.array)
        return complex(c1), complex(c2)

    def isclose(self, other, tol=1e-12):
        return bool(norm(self.array - other.array) <= tol)


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)
