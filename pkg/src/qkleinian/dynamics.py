"""Orbits, limits of powers, clustering and the numerical limit-set campaigns."""
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from . import _kernels, hmat, quat
from .classify import Fine
from .errors import CapReachedError, ConsistencyError, DiagnosticError, DomainError
from .projective import ProjLine, ProjPoint, canonical, residual

TAIL_FRACTION = 0.8


# ------------------------------------------------------------------ orbits

@dataclass
class OrbitTrace:
    generator: np.ndarray
    base: ProjPoint
    ns: np.ndarray
    points: np.ndarray  # canonical representatives, shape (K, 3, 4)

    @property
    def samples(self):
        return [(int(n), ProjPoint(v)) for n, v in zip(self.ns, self.points)]

    def to_table(self):
        comps = ("w", "x", "y", "z")
        header = ["n"] + [f"{c}.{q}" for c in ("x", "y", "z") for q in comps]
        lines = ["\t".join(header)]
        for n, v in zip(self.ns, self.points):
            lines.append("\t".join([str(int(n))] + [repr(float(a)) for a in v.reshape(-1)]))
        return "\n".join(lines) + "\n"


def _as_vec(p):
    return p.vec if isinstance(p, ProjPoint) else canonical(p)


def orbit(g, p, n_from=0, n_to=100):
    """The points g^n(p) for n_from <= n <= n_to, canonicalized at each step."""
    if n_to < n_from:
        raise DomainError("n_to must be >= n_from")
    g = hmat.asmat(g)
    v = _as_vec(p)
    parts, ns = [], []
    if n_from < 0:
        back = _kernels.trace(hmat.inverse(g), v, -n_from)  # back[k] = g^{-k}(p)
        hi = min(n_to, 0)
        parts.append(back[-hi:][::-1])
        ns.append(np.arange(n_from, hi + 1))
    if n_to >= 0 and (n_from >= 0 or n_to > 0):
        lo = n_from if n_from >= 0 else 1
        start = _kernels.iterate(g, v[None], lo)[0] if lo else v
        parts.append(_kernels.trace(g, start, n_to - lo))
        ns.append(np.arange(lo, n_to + 1))
    pts = np.concatenate(parts)
    ns = np.concatenate(ns)
    return OrbitTrace(g, ProjPoint(v), ns, canonical(pts))


def iterate_points(g, V, n):
    """g^n applied to a batch of vectors (negative n uses the inverse)."""
    g = hmat.asmat(g)
    M = hmat.inverse(g) if n < 0 else g
    return _kernels.iterate(M, np.asarray(V, dtype=float), abs(int(n)))


# ------------------------------------------------------------------ clusters

@dataclass
class ClusterSet:
    representatives: list
    radius: float

    def as_array(self):
        if not self.representatives:
            return np.zeros((0, 3, 4))
        return np.stack([p.vec for p in self.representatives])


def cluster_array(V, eps, reps=None):
    """Greedy clustering: a point starts a new cluster unless within eps of a representative.

    Equivalent to scanning the points in order; each new representative
    removes every later point within eps in one vectorized pass.
    """
    reps = [] if reps is None else list(reps)
    V = canonical(np.asarray(V, dtype=float).reshape(-1, 3, 4))
    for r in reps:
        V = V[residual(r[None], V) >= eps]
    while len(V):
        r = V[0]
        reps.append(r)
        V = V[1:][residual(r[None], V[1:]) >= eps]
    return reps


def cluster_points(trace, tail_start=None, eps=1e-3):
    pts = trace.points
    if tail_start is None:
        tail_start = int(TAIL_FRACTION * (len(pts) - 1))
    reps = cluster_array(pts[tail_start:], eps)
    return ClusterSet([ProjPoint(r) for r in reps], eps)


def sample_points(seed, count, exclude=None, exclude_radius=0.05, sampler=None, max_tries=1000):
    """Seeded random points; point i depends only on (seed, i).

    ``sampler(rng)`` may replace the default Gaussian vector sampler, e.g. to
    restrict to a line. Points within ``exclude_radius`` of ``exclude`` are
    redrawn.
    """
    out = np.empty((count, 3, 4))
    for i in range(count):
        rng = np.random.default_rng([seed, i])
        for _ in range(max_tries):
            v = sampler(rng) if sampler else rng.standard_normal((3, 4))
            n = math.sqrt(float(np.sum(v * v)))
            if n < 1e-3:
                continue
            v = canonical(v)
            if exclude is not None and exclude.distance_many(v[None])[0] <= exclude_radius:
                continue
            out[i] = v
            break
        else:
            raise DiagnosticError(f"could not sample point {i} away from the excluded set")
    return out


def kulkarni_L1_estimate(g, sample_count=200, seed=0, max_iter=500, eps=1e-3, exclude=None,
                         exclude_radius=0.05, sampler=None, tail_fraction=TAIL_FRACTION):
    """Cluster points of forward and backward orbit tails of random points."""
    g = hmat.asmat(g)
    V = sample_points(seed, sample_count, exclude, exclude_radius, sampler)
    start = int(tail_fraction * max_iter)
    reps = []
    for M in (g, hmat.inverse(g)):
        tail = _kernels.tail(M, V, max_iter, start)
        reps = cluster_array(tail, eps, reps)
    return ClusterSet([ProjPoint(r) for r in reps], eps)


# ------------------------------------------------------------------ powers

@dataclass
class PseudoProjective:
    matrix: np.ndarray
    kernel: object  # None | ProjPoint | ProjLine
    image: object   # ProjPoint | ProjLine | "whole"
    rank: int

    def apply(self, p):
        w = hmat.mat_vec(self.matrix, _as_vec(p))
        if np.sqrt(np.sum(w * w)) <= 1e-12 * max(1.0, hmat.sup_norm(self.matrix)):
            raise DomainError("point lies in the kernel of the pseudo-projective map")
        return ProjPoint(w)


def kernel_and_image(B, tol=1e-8):
    """Quaternionic rank, kernel and image of a matrix read from its adjoint."""
    P = hmat.phi_embed(B)
    U, s, Vh = np.linalg.svd(P)
    rc = int(np.sum(s > tol * s[0]))
    if rc % 2:
        raise ConsistencyError(f"adjoint rank {rc} is odd")
    r = rc // 2
    kernel = image = None
    if r == 2:
        kernel = ProjPoint(hmat.c6_to_vec(Vh[-1].conj()))
        image = ProjLine(ProjPoint(hmat.c6_to_vec(U[:, -1])))
    elif r == 1:
        kernel = ProjLine(ProjPoint(hmat.c6_to_vec(Vh[0].conj())))
        image = ProjPoint(hmat.c6_to_vec(U[:, 0]))
    else:
        image = "whole"
    return r, kernel, image


def _same_kernel(a, b, tol=1e-6):
    if a is None or b is None:
        return a is b
    if type(a) is not type(b):
        return False
    return a.isclose(b, tol)


def renormalized_powers(g, n, direction=1):
    """B_k = g^k / sup_norm(g^k) for k = 1..n, built incrementally."""
    g = hmat.asmat(g)
    M = g if direction > 0 else hmat.inverse(g)
    M = M / hmat.sup_norm(M)
    out = [M]
    for _ in range(n - 1):
        B = hmat.mat_mul(M, out[-1])
        out.append(B / hmat.sup_norm(B))
    return out


def _matrix_clusters(mats, eps):
    reps = []
    for B in mats:
        if any(min(np.abs(B - R).max(), np.abs(B + R).max()) < eps for R in reps):
            continue
        reps.append(B)
    return reps


def limit_of_powers(g, direction=1, N=2 ** 40, tol=1e-8, window=16, cluster_eps=1e-3):
    """Cluster limits of the renormalized powers g^n / |g^n| near n = N.

    The power g^(N - window + 1) is reached by binary powering with
    renormalization, the remaining window by single steps. Every cluster must
    have the same kernel; otherwise a DiagnosticError is raised.
    """
    if direction in ("forward", "backward"):
        direction = 1 if direction == "forward" else -1
    g = hmat.asmat(g)
    M = g if direction > 0 else hmat.inverse(g)
    M = M / hmat.sup_norm(M)
    B = hmat.power(M, max(N - window + 1, 1))
    mats = [B]
    for _ in range(window - 1):
        B = hmat.mat_mul(M, B)
        B = B / hmat.sup_norm(B)
        mats.append(B)
    out = []
    for R in _matrix_clusters(mats, cluster_eps):
        r, ker, img = kernel_and_image(R, tol)
        out.append(PseudoProjective(R, ker, img, r))
    first = out[0].kernel
    for pp in out[1:]:
        if not _same_kernel(first, pp.kernel):
            raise DiagnosticError("cluster limits of the powers have different kernels")
    return out


# ------------------------------------------------------------------ witnesses

@dataclass
class WitnessSample:
    n: int
    point: ProjPoint  # the witness k_n (double precision rendering)
    image: ProjPoint  # g^{direction * n}(k_n), evaluated in extended range
    direction: int


_PREC = 160


def _mp_split(v):
    """Split a list of mp quaternions (w, x, y, z) into complex parts."""
    return ([mpmath.mpc(w, x) for w, x, _, _ in v], [mpmath.mpc(y, z) for _, _, y, z in v])


def _mp_quat(q):
    return tuple(mpmath.mpf(float(c)) for c in q)


def _mp_scale(q, s):
    return tuple(c * s for c in q)


def _mp_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _mp_cmul(c, q):
    """Complex number times quaternion, complex on the left."""
    c1 = mpmath.mpc(q[0], q[1])
    c2 = mpmath.mpc(q[2], q[3])
    a, b = c * c1, c * c2
    return (a.real, a.imag, b.real, b.imag)


def _mp_power(M, n):
    result = mpmath.eye(3)
    base = M
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


def _mp_to_point(a, b):
    scale = max(max(abs(x) for x in a), max(abs(x) for x in b))
    ca = np.array([complex(x / scale) for x in a])
    cb = np.array([complex(x / scale) for x in b])
    return ProjPoint(quat.from_complex(ca, cb))


def _mp_vec_to_point(v):
    scale = max(max(abs(c) for c in q) for q in v)
    return ProjPoint(np.array([[float(c / scale) for c in q] for q in v]))


def _canonical_complex(cls):
    from .classify import canonical_form
    A1, A2 = hmat.split(canonical_form(cls))
    if np.abs(A2).max() > 0:
        raise DomainError("witness evaluation needs a complex canonical form")
    return A1


def _phase_score(angles, ns):
    if not angles:
        return np.zeros(len(ns))
    return np.max([np.abs(np.exp(2j * np.pi * ns * a) - 1) for a in angles], axis=0)


def witness_times(angles, n_max, count=4):
    """Increasing times up to n_max at which all phases e^{2 pi i n a} are closest to 1."""
    out = []
    for k in range(count, 0, -1):
        hi = max(1, n_max // 2 ** (k - 1))
        lo = max(1, hi // 2)
        ns = np.arange(lo, hi + 1)
        score = _phase_score(angles, ns)
        best = np.flatnonzero(score <= score.min() + 1e-12)[-1]
        n = int(ns[best])
        if not out or n > out[-1]:
            out.append(n)
    return out


def _normalized_target(t, pivot):
    """Quaternion ratios t_i t_pivot^{-1}."""
    inv = quat.inverse(t[pivot])
    return [quat.mul(t[i], inv) for i in range(3)]


def l2_witness(cls, target, ns=None, n_max=None, tol=1e-12):
    """Witness sequence k_n with g^{+-n}(k_n) -> target on a predicted L2 line.

    Supported subclasses: regular loxodromic, loxo-parabolic (|lambda| > 1),
    non-vertical translation and ellipto-translation. The images are
    evaluated in extended precision because k_n may differ from its limit by
    far less than the double-precision range allows.
    """
    t = _as_vec(target)
    mag = quat.norm(t)
    f = cls.fine
    p = cls.params
    if f is Fine.REGULAR_LOXODROMIC:
        angles = [p[k].angle.value for k in ("lambda", "mu", "xi")]
        n_max = n_max or 80
    elif f is Fine.LOXO_PARABOLIC:
        if p["lambda"].modulus <= 1:
            raise DomainError("loxo-parabolic witnesses implemented for |lambda| > 1")
        angles = [p[k].angle.value for k in ("lambda", "xi")]
    elif f in (Fine.NON_VERTICAL_TRANSLATION, Fine.ELLIPTO_TRANSLATION):
        angles = [p["lambda"].angle.value] if f is Fine.ELLIPTO_TRANSLATION else []
        n_max = n_max or 10_000
    else:
        raise DomainError(f"no witness sequence for {f.value}")

    A1 = _canonical_complex(cls)
    with mpmath.workprec(_PREC):
        G = mpmath.matrix([[mpmath.mpc(complex(A1[i, j])) for j in range(3)] for i in range(3)])
        Ginv = G ** -1
        one = (mpmath.mpf(1), mpmath.mpf(0), mpmath.mpf(0), mpmath.mpf(0))
        zero = (mpmath.mpf(0),) * 4

        if f is Fine.REGULAR_LOXODROMIC:
            lam, mu, xi = (mpmath.mpf(p[k].modulus) for k in ("lambda", "mu", "xi"))
            if mag[0] <= tol:      # [0 : y : z], reached forward
                direction = 1
                y, z = _mp_quat(t[1]), _mp_quat(t[2])

                def build(n):
                    a = (xi ** n) * mpmath.sqrt(sum(c * c for c in y))
                    b = (mu ** n) * mpmath.sqrt(sum(c * c for c in z))
                    return [(mpmath.sqrt(a * a + b * b), 0, 0, 0), _mp_scale(y, xi ** n), _mp_scale(z, mu ** n)]
            elif mag[2] <= tol:    # [x : y : 0], reached backward
                direction = -1
                x, y = _mp_quat(t[0]), _mp_quat(t[1])

                def build(n):
                    a = mu ** -n * mpmath.sqrt(sum(c * c for c in x))
                    b = lam ** -n * mpmath.sqrt(sum(c * c for c in y))
                    return [_mp_scale(x, mu ** -n), _mp_scale(y, lam ** -n), (mpmath.sqrt(a * a + b * b), 0, 0, 0)]
            else:
                raise DomainError("target is not on a predicted L2 line")
        elif f is Fine.LOXO_PARABOLIC:
            lam_c = mpmath.mpc(complex(p["lambda"].value))
            lam = abs(lam_c)
            if mag[1] <= tol and mag[2] > tol:   # [w : 0 : 1], reached backward
                direction = -1
                n_max = n_max or 10_000
                w_inv = _mp_quat(quat.inverse(_normalized_target(t, 2)[0]))

                def build(n):
                    return [one, one, _mp_scale(w_inv, -mpmath.mpf(n) / lam ** (3 * n + 1))]
            elif mag[2] <= tol and mag[1] > tol:  # [y : 1 : 0], reached forward
                direction = 1
                n_max = n_max or 80
                y = _mp_quat(_normalized_target(t, 1)[0])
                c = -1 / lam_c

                def build(n):
                    first = _mp_add((c.real, c.imag, 0, 0), _mp_scale(y, mpmath.mpf(1) / n))
                    return [first, (mpmath.mpf(1) / n, 0, 0, 0), (1 / lam, 0, 0, 0)]
            else:
                raise DomainError("target is not on a predicted L2 line")
        else:
            if mag[2] > tol or mag[1] <= tol:
                raise DomainError("target is not on the predicted L2 line [x : 1 : 0]")
            direction = 1
            x = _mp_quat(_normalized_target(t, 1)[0])
            if f is Fine.NON_VERTICAL_TRANSLATION:
                def build(n):
                    n = mpmath.mpf(n)
                    return [x, (-(n - 1) / n, 0, 0, 0), (2 / n, 0, 0, 0)]
            else:
                e = mpmath.expjpi(2 * mpmath.mpf(p["lambda"].angle.value))

                def build(n):
                    n = mpmath.mpf(n)
                    return [x, (-1 + 1 / n, 0, 0, 0), _mp_cmul(2 / n * e, one)]

        if ns is None:
            ns = witness_times(angles, n_max)
        M = G if direction > 0 else Ginv
        out = []
        for n in ns:
            k = build(int(n))
            a, b = _mp_split(k)
            P = _mp_power(M, int(n))
            ia = P * mpmath.matrix(a)
            ib = P * mpmath.matrix(b)
            out.append(WitnessSample(int(n), _mp_vec_to_point(k), _mp_to_point(list(ia), list(ib)), direction))
    return out


# ------------------------------------------------------------------ density

def density_check_s1(alpha, eps, cap=10 ** 7):
    """Least N with max gap of {e^{2 pi i n alpha} : 0 <= n <= N} at most 2 arcsin(eps / 2)."""
    thr = 2.0 * math.asin(eps / 2.0) / (2.0 * math.pi)
    lo, hi = 0, 1
    while _kernels.s1_max_gap(alpha, hi) > thr:
        if hi >= cap:
            raise CapReachedError(cap, _kernels.s1_max_gap(alpha, cap) * 2 * math.pi)
        lo, hi = hi, min(2 * hi, cap)
    # the max gap only shrinks as points are added, so bisect between lo and hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _kernels.s1_max_gap(alpha, mid) > thr:
            lo = mid
        else:
            hi = mid
    return hi


def density_check_t2(alpha, beta, eps, cap=10 ** 7):
    """Least N at which {(n alpha, n beta) : n <= N} meets every cell of a grid of side <= eps.

    Coordinates are in turns; every point of the torus is then within eps of
    the orbit in the max metric.
    """
    m = math.ceil(1.0 / eps)
    n = _kernels.t2_first_cover(alpha, beta, m, cap)
    if n < 0:
        raise CapReachedError(cap, float("nan"))
    return n


def recurrence_check(g, p, eps, N):
    """Least n in [1, N] with chordal_dist(g^n(p), p) < eps."""
    n = int(_kernels.first_return(hmat.asmat(g), _as_vec(p)[None], eps, N)[0])
    if n < 0:
        raise DiagnosticError(f"no return within {eps} up to n = {N}")
    return n


def first_returns(g, V, eps, N):
    """Vectorized recurrence search; -1 marks points without a return."""
    return _kernels.first_return(hmat.asmat(g), np.asarray(V, dtype=float), eps, N)
