"""The quaternionic projective plane.

Points are right-scalar classes of nonzero vectors in H^3. Inner products are
``<p, q> = sum conj(p_i) q_i`` and the chordal distance between unit
representatives is ``sqrt(1 - |<p, q>|^2)``, evaluated here as the length of
the component of ``q`` orthogonal to the quaternionic line through ``p``,
which stays accurate for tiny distances.
"""
import numpy as np

from . import hmat, quat
from .errors import DomainError

ZERO_TOL = 1e-14


def _unit(v):
    v = hmat.asvec(v)
    n = np.sqrt(np.sum(v * v, axis=(-2, -1)))
    if np.any(n == 0.0):
        raise DomainError("the zero vector does not define a projective point")
    return v / n[..., None, None]


def canonical(v):
    """Unit representative whose first nonzero coordinate is real positive.

    Works on a single vector (3, 4) or a batch (..., 3, 4).
    """
    v = _unit(v)
    mags = quat.norm(v)
    first = np.argmax(mags > ZERO_TOL, axis=-1)
    c = np.take_along_axis(v, first[..., None, None], axis=-2)[..., 0, :]
    phase = quat.conj(c) / quat.norm(c)[..., None]
    return quat.mul(v, phase[..., None, :])


def inner(p, q):
    """<p, q> = sum conj(p_i) q_i (a quaternion)."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return np.sum(quat.mul(quat.conj(p), q), axis=-2)


def residual(p, q):
    """Chordal distance of unit vectors, vectorized over leading axes."""
    c = inner(p, q)
    d = q - quat.mul(p, c[..., None, :])
    return np.minimum(np.sqrt(np.sum(d * d, axis=(-2, -1))), 1.0)


class ProjPoint:
    """A point of the quaternionic projective plane."""

    __slots__ = ("vec",)

    def __init__(self, v):
        vec = canonical(v)
        vec.setflags(write=False)
        self.vec = vec

    def __repr__(self):
        coords = ", ".join("[" + " ".join(f"{c:.6g}" for c in q) + "]" for q in self.vec)
        return f"ProjPoint({coords})"

    def isclose(self, other, tol=1e-10):
        return chordal_dist(self, other) <= tol

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        return self.isclose(other)

    __hash__ = None

    def to_json(self):
        return self.vec.tolist()


def proj_point(v):
    return ProjPoint(v)


def basis(i):
    """The coordinate point e_i, i in {1, 2, 3}."""
    v = np.zeros((3, 4))
    v[i - 1, 0] = 1.0
    return ProjPoint(v)


E1, E2, E3 = basis(1), basis(2), basis(3)


def _vec(p):
    return p.vec if isinstance(p, ProjPoint) else _unit(p)


def chordal_dist(p, q):
    return float(residual(_vec(p), _vec(q)))


def _gram_schmidt(vectors, tol=1e-10):
    """Right-module Gram-Schmidt; returns the orthonormal family and residual norms."""
    out = []
    norms = []
    for v in vectors:
        w = np.array(v, dtype=float)
        for u in out:
            w = w - quat.mul(u, inner(u, w)[None, :])
        n = float(np.sqrt(np.sum(w * w)))
        norms.append(n)
        if n > tol:
            out.append(w / n)
    return out, norms


def _complement(vectors):
    """A unit vector orthogonal (quaternionically) to the given orthonormal ones."""
    best = None
    for k in range(3):
        e = np.zeros((3, 4))
        e[k, 0] = 1.0
        w = e
        for u in vectors:
            w = w - quat.mul(u, inner(u, w)[None, :])
        n = np.sqrt(np.sum(w * w))
        if best is None or n > best[0]:
            best = (n, w)
    return best[1] / best[0]


class ProjLine:
    """A quaternionic projective line {x : <polar, x> = 0}."""

    __slots__ = ("polar", "span")

    def __init__(self, polar, span=None):
        self.polar = polar if isinstance(polar, ProjPoint) else ProjPoint(polar)
        if span is None:
            a = _complement([self.polar.vec])
            b = _complement([self.polar.vec, a])
            span = (ProjPoint(a), ProjPoint(b))
        self.span = tuple(span)

    def __repr__(self):
        return f"ProjLine(polar={self.polar!r})"

    def isclose(self, other, tol=1e-10):
        return self.polar.isclose(other.polar, tol)

    def basis_vectors(self):
        """Orthonormal right-basis of the underlying 2-dimensional submodule."""
        out, _ = _gram_schmidt([p.vec for p in self.span])
        return out


def line_through(p, q, tol=1e-10):
    (u, *rest), norms = _gram_schmidt([_vec(p), _vec(q)], tol)
    if not rest:
        raise DomainError(f"points coincide (residual {norms[1]:.2e}); no unique line")
    polar = _complement([u, rest[0]])
    return ProjLine(ProjPoint(polar), (ProjPoint(p.vec if isinstance(p, ProjPoint) else p),
                                        ProjPoint(q.vec if isinstance(q, ProjPoint) else q)))


def line_from_polar(n):
    return ProjLine(n)


def point_line_dist(r, L):
    return float(quat.norm(inner(L.polar.vec, _vec(r))))


class ComplexSpan:
    """Points [v_1 a_1 + ... + v_k a_k] with complex coefficients a_i.

    Two vectors give a complex projective line inside the quaternionic line
    they span; three independent vectors give a copy of the complex plane.
    """

    __slots__ = ("vectors", "_q")

    def __init__(self, vectors):
        vecs = np.array([hmat.asvec(v) for v in vectors], dtype=float)
        self.vectors = vecs
        cols = np.stack([hmat.vec_to_c6(v) for v in vecs], axis=1)
        q, r = np.linalg.qr(cols)
        if np.min(np.abs(np.diag(r))) < 1e-12 * max(1.0, np.abs(r).max()):
            raise DomainError("complex span vectors are dependent")
        self._q = q

    @property
    def dim(self):
        return len(self.vectors)

    def distance_many(self, V):
        """Distance from each unit vector in V (P, 3, 4) to the span."""
        V = np.asarray(V, dtype=float)
        u = hmat.vec_to_c6(V)
        uj = hmat.vec_to_c6(quat.mul(V, np.array([0.0, 0.0, 1.0, 0.0])))
        R = np.stack([u, uj], axis=-1)
        # the residual form stays accurate for points very close to the span
        E = R - self._q @ (np.conj(self._q.T) @ R)
        s = np.linalg.svd(E, compute_uv=False)[..., -1]
        return np.minimum(s, 1.0)

    def distance(self, r):
        return float(self.distance_many(_vec(r)[None])[0])

    def isclose(self, other, tol=1e-9):
        if self.dim != other.dim:
            return False
        d = np.concatenate([self.distance_many(canonical(other.vectors)),
                            other.distance_many(canonical(self.vectors))])
        return bool(np.max(d) <= tol)


def standard_complex_line(i=1, j=2):
    return ComplexSpan([basis(i).vec, basis(j).vec])


def standard_complex_plane():
    return ComplexSpan([E1.vec, E2.vec, E3.vec])


def in_complex_line(r, pair=(1, 2), tol=1e-9):
    """Membership in the complex line joining two coordinate points.

    ``pair`` names the basis points, e.g. (1, 2) for e1 and e2. The third
    coordinate must vanish; after right-normalizing the larger of the two
    remaining coordinates to 1 the other must be complex.
    """
    v = _vec(r)
    a, b = pair[0] - 1, pair[1] - 1
    third = 3 - a - b
    if quat.norm(v[third]) > tol:
        return False
    big, small = (a, b) if quat.norm(v[a]) >= quat.norm(v[b]) else (b, a)
    ratio = quat.mul(v[small], quat.inverse(v[big]))
    return bool(np.hypot(ratio[2], ratio[3]) <= tol)


def apply(g, p):
    w = hmat.mat_vec(hmat.asmat(g), _vec(p))
    if np.sqrt(np.sum(w * w)) <= ZERO_TOL:
        raise DomainError("point lies in the kernel of the transformation")
    return ProjPoint(w)


def dual_matrix(g):
    """Matrix acting on polars: transpose of the inverse, taken literally."""
    return hmat.transpose(hmat.inverse(hmat.asmat(g)))


def dual_apply(g, line):
    return ProjLine(apply(dual_matrix(g), line.polar))


def random_vectors(rng, n, min_norm=1e-3):
    """n vectors with standard normal quaternion coordinates (P, 3, 4)."""
    out = np.empty((n, 3, 4))
    k = 0
    while k < n:
        v = rng.standard_normal((3, 4))
        if np.sqrt(np.sum(v * v)) >= min_norm:
            out[k] = v
            k += 1
    return out


def random_point(rng):
    return ProjPoint(random_vectors(rng, 1)[0])


def random_unitary(rng):
    """A random quaternionic unitary matrix (columns orthonormal)."""
    cols, _ = _gram_schmidt(list(rng.standard_normal((3, 3, 4))))
    return np.stack(cols, axis=1)
