"""Eigenvalue classes, Jordan structure and fixed points.

Right eigenvalues of a quaternionic matrix come in similarity classes; each
class has a unique complex representative with nonnegative imaginary part.
All computations go through the complex adjoint, whose spectrum is the union
of the representatives and their conjugates. ``A v = v lambda`` for complex
lambda is equivalent to ``Phi(A) u = lambda u`` with ``u = vec_to_c6(v)``.
"""
from dataclasses import dataclass, field

import numpy as np

from . import hmat, quat
from .errors import ConsistencyError, PreconditionError, RankAmbiguityError
from .projective import ComplexSpan, ProjLine, ProjPoint, _gram_schmidt, _complement

MERGE_TOL = 1e-4
PAIR_TOL = 1e-9
RANK_TOL = 1e-8
AMBIGUITY_BAND = 100.0


@dataclass(frozen=True)
class EigenClass:
    representative: complex
    multiplicity: int

    @property
    def modulus(self):
        return abs(self.representative)

    @property
    def argument(self):
        return float(np.angle(self.representative)) if self.representative.imag >= 0 else 0.0

    @property
    def is_real(self):
        return self.representative.imag == 0.0


@dataclass(frozen=True)
class JordanStructure:
    blocks: tuple  # (representative, size) pairs, largest blocks first

    def sizes(self):
        return sorted((s for _, s in self.blocks), reverse=True)

    def is_semisimple(self):
        return all(s == 1 for _, s in self.blocks)


@dataclass
class FixedSet:
    components: list = field(default_factory=list)  # ProjPoint | ProjLine | ComplexSpan | "whole"


def _clusters(values, tol):
    """Single-linkage clusters of complex numbers (relative tolerance)."""
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            scale = max(1.0, abs(values[i]), abs(values[j]))
            if abs(values[i] - values[j]) <= tol * scale:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(values[i])
    return [np.array(g) for g in groups.values()]


def eigen_classes(A, merge_tol=MERGE_TOL, pair_tol=PAIR_TOL):
    """Eigenvalue classes with algebraic multiplicities summing to 3.

    Eigenvalues of the adjoint are grouped first, so a defective eigenvalue
    that the eigensolver splits into a small cloud is represented by the
    cloud's mean, which is far more accurate than its members.
    """
    ev = np.linalg.eigvals(hmat.phi_embed(A))
    groups = [(g.mean(), len(g)) for g in _clusters(list(ev), merge_tol)]
    scale = max(1.0, max(abs(v) for v in ev))
    classes = []
    used = [False] * len(groups)
    for i, (c, m) in enumerate(groups):
        if used[i]:
            continue
        if abs(c.imag) <= pair_tol * scale:
            if m % 2:
                raise ConsistencyError(f"real eigenvalue {c.real:.6g} has odd multiplicity {m} in the adjoint")
            used[i] = True
            classes.append(EigenClass(complex(c.real, 0.0), m // 2))
            continue
        best, best_d = None, np.inf
        for j, (c2, m2) in enumerate(groups):
            if used[j] or j == i:
                continue
            d = abs(c2 - np.conj(c))
            if d < best_d:
                best, best_d = j, d
        if best is None or best_d > pair_tol * scale or groups[best][1] != m:
            raise ConsistencyError(f"eigenvalue {c:.6g} has no conjugate partner (gap {best_d:.2e})")
        used[i] = used[best] = True
        rep = (c + np.conj(groups[best][0])) / 2
        rep = complex(rep.real, abs(rep.imag))
        classes.append(EigenClass(rep, m))
    classes.sort(key=lambda e: (e.modulus, e.representative.imag))
    if sum(e.multiplicity for e in classes) != 3:
        raise ConsistencyError("eigenvalue multiplicities do not sum to 3")
    return classes


def _rank(M, lam, k, scale, rank_tol):
    s = np.linalg.svd(M, compute_uv=False)
    thresh = rank_tol * scale
    ambiguous = (s > thresh / AMBIGUITY_BAND) & (s <= thresh * AMBIGUITY_BAND)
    if ambiguous.any():
        raise RankAmbiguityError(lam, k, s)
    return int(np.sum(s > thresh))


def _shifted(A, lam):
    P = hmat.phi_embed(A)
    return P - lam * np.eye(6)


def jordan_structure(A, rank_tol=RANK_TOL, classes=None):
    """Jordan block sizes per eigenvalue class.

    Block counts come from ranks of powers of ``Phi(A) - lambda I``. A block
    J(lambda, m) appears twice at lambda in the adjoint when lambda is real,
    and once at lambda (once at its conjugate) otherwise.
    """
    classes = classes or eigen_classes(A)
    norm_phi = np.linalg.norm(hmat.phi_embed(A), 2)
    blocks = []
    for c in classes:
        lam = c.representative
        N = _shifted(A, lam)
        base = max(np.linalg.norm(N, 2), norm_phi, 1e-300)
        copies = 2 if c.is_real else 1
        alg = c.multiplicity * copies
        ranks = [6]
        Nk = np.eye(6, dtype=complex)
        for k in range(1, alg + 2):
            Nk = Nk @ N
            ranks.append(_rank(Nk, lam, k, base ** k, rank_tol))
        at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
        at_least.append(0)
        for size in range(1, alg + 1):
            count = at_least[size - 1] - at_least[size]
            if count % copies:
                raise ConsistencyError(f"adjoint block count {count} at {lam:.6g} is not a multiple of {copies}")
            blocks.extend([(lam, size)] * (count // copies))
        got = sum(s for l, s in blocks if l == lam)
        if got != c.multiplicity:
            raise ConsistencyError(f"Jordan blocks at {lam:.6g} total {got}, expected {c.multiplicity}")
    blocks.sort(key=lambda b: (-b[1], abs(b[0])))
    return JordanStructure(tuple(blocks))


def _null_space(M, tol):
    u, s, vh = np.linalg.svd(M)
    thresh = tol * max(1.0, s[0])
    rank = int(np.sum(s > thresh))
    return vh[rank:].conj().T


def eigenspace(A, lam, tol=RANK_TOL):
    """Complex basis (columns) of {u : Phi(A) u = lam u}."""
    return _null_space(_shifted(A, lam), tol)


def _quaternionic_basis(ns):
    """Right-orthonormal quaternion vectors spanning a J-closed complex space."""
    vecs = [hmat.c6_to_vec(ns[:, k]) for k in range(ns.shape[1])]
    out, _ = _gram_schmidt(vecs, 1e-8)
    return out


def fixed_points(A, tol=RANK_TOL):
    """Fixed points of the projective map, grouped by eigenvalue class."""
    comps = []
    for c in eigen_classes(A):
        ns = eigenspace(A, c.representative, tol)
        d = ns.shape[1]
        if c.is_real:
            basis = _quaternionic_basis(ns)
            if len(basis) == 1:
                comps.append(ProjPoint(basis[0]))
            elif len(basis) == 2:
                comps.append(ProjLine(ProjPoint(_complement(basis)), tuple(ProjPoint(b) for b in basis)))
            else:
                comps.append("whole")
        else:
            vecs = [hmat.c6_to_vec(ns[:, k]) for k in range(d)]
            if d == 1:
                comps.append(ProjPoint(vecs[0]))
            else:
                comps.append(ComplexSpan(vecs))
    return FixedSet(comps)


def is_proximal(A, tol=1e-9):
    """Exactly one class of maximal modulus, and it is simple."""
    classes = eigen_classes(A)
    top = classes[-1]
    if len(classes) > 1 and classes[-2].modulus >= top.modulus * (1 - tol):
        return False
    return top.multiplicity == 1


def attracting_fixed_point(A, tol=1e-9):
    """Dominant eigendirection of a matrix with one maximal-modulus class.

    The dominant class may be a single Jordan block (loxo-parabolic case);
    its eigenvector is then the attracting point of the forward dynamics.
    """
    classes = eigen_classes(A)
    top = classes[-1]
    if len(classes) > 1 and classes[-2].modulus >= top.modulus * (1 - tol):
        raise PreconditionError("no strictly dominant eigenvalue class")
    ns = eigenspace(A, top.representative)
    basis = _quaternionic_basis(ns) if top.is_real else [hmat.c6_to_vec(ns[:, 0])]
    if len(basis) != 1 or (not top.is_real and ns.shape[1] != 1):
        raise PreconditionError("dominant eigenspace is not one-dimensional")
    return ProjPoint(basis[0])


def spectral_record(A):
    classes = eigen_classes(A)
    js = jordan_structure(A, classes=classes)
    return {
        "classes": [
            {"re": c.representative.real, "im": c.representative.imag, "multiplicity": c.multiplicity}
            for c in classes
        ],
        "blocks": [[complex(l).real, complex(l).imag, s] for l, s in js.blocks],
    }
