"""Hot loops of the orbit and density campaigns.

Each kernel exists twice with the same signature: a numba version compiled
with ``@njit`` and a vectorized numpy version. ``QK_NUMBA=0`` in the
environment (or a missing numba install) selects the numpy versions.
Vectors are float arrays (..., 3, 4) holding quaternion coordinates; they are
renormalized to unit Euclidean length after every step.
"""
import os

import numpy as np

from . import quat

try:
    from numba import njit
except ImportError:  # pragma: no cover
    njit = None

USE_NUMBA = njit is not None and os.environ.get("QK_NUMBA", "1").lower() not in ("0", "false", "off", "no")


# ---------------------------------------------------------------- numpy path

def _np_step(M, V):
    W = np.sum(quat.mul(M, V[:, None, :, :]), axis=-2)
    n = np.sqrt(np.sum(W * W, axis=(-2, -1)))
    return W / n[:, None, None]


def _np_residual(P, R):
    """Chordal distance ||r - p <p, r>|| for unit rows."""
    inner = np.sum(quat.mul(quat.conj(P), R), axis=-2)
    diff = R - quat.mul(P, inner[:, None, :])
    return np.sqrt(np.sum(diff * diff, axis=(-2, -1)))


def np_iterate(M, V, n):
    V = np.array(V, dtype=float)
    for _ in range(n):
        V = _np_step(M, V)
    return V


def np_trace(M, v, n):
    out = np.empty((n + 1, 3, 4))
    cur = np.array(v, dtype=float)[None]
    cur = cur / np.linalg.norm(cur)
    out[0] = cur[0]
    for k in range(1, n + 1):
        cur = _np_step(M, cur)
        out[k] = cur[0]
    return out


def np_tail(M, V, n_total, start):
    V = np.array(V, dtype=float)
    V = V / np.sqrt(np.sum(V * V, axis=(-2, -1)))[:, None, None]
    out = np.empty((n_total - start + 1,) + V.shape)
    for k in range(n_total + 1):
        if k:
            V = _np_step(M, V)
        if k >= start:
            out[k - start] = V
    return out


def np_first_return(M, V, eps, nmax):
    V0 = np.array(V, dtype=float)
    V0 = V0 / np.sqrt(np.sum(V0 * V0, axis=(-2, -1)))[:, None, None]
    found = np.full(len(V0), -1, dtype=np.int64)
    cur = V0.copy()
    active = np.arange(len(V0))
    for k in range(1, nmax + 1):
        if active.size == 0:
            break
        cur = _np_step(M, cur)
        hit = _np_residual(V0[active], cur) < eps
        if hit.any():
            found[active[hit]] = k
            active = active[~hit]
            cur = cur[~hit]
    return found


def np_s1_max_gap(alpha, n):
    pts = np.sort((np.arange(n + 1) * alpha) % 1.0)
    gaps = np.diff(pts)
    wrap = 1.0 - pts[-1] + pts[0]
    return max(float(gaps.max()) if gaps.size else 0.0, wrap)


def np_t2_first_cover(alpha, beta, m, cap, chunk=1 << 16):
    first = np.full(m * m, -1, dtype=np.int64)
    remaining = m * m
    for lo in range(0, cap + 1, chunk):
        ks = np.arange(lo, min(lo + chunk, cap + 1))
        a = np.minimum(((ks * alpha) % 1.0 * m).astype(np.int64), m - 1)
        b = np.minimum(((ks * beta) % 1.0 * m).astype(np.int64), m - 1)
        cells = a * m + b
        uniq, idx = np.unique(cells, return_index=True)
        new = first[uniq] < 0
        first[uniq[new]] = ks[idx[new]]
        remaining -= int(new.sum())
        if remaining == 0:
            return int(first.max())
    return -1


# ---------------------------------------------------------------- numba path

if njit is not None:

    @njit(cache=True)
    def _nb_step(M, v, out):
        for i in range(3):
            w = 0.0
            x = 0.0
            y = 0.0
            z = 0.0
            for j in range(3):
                aw, ax, ay, az = M[i, j, 0], M[i, j, 1], M[i, j, 2], M[i, j, 3]
                bw, bx, by, bz = v[j, 0], v[j, 1], v[j, 2], v[j, 3]
                w += aw * bw - ax * bx - ay * by - az * bz
                x += aw * bx + ax * bw + ay * bz - az * by
                y += aw * by - ax * bz + ay * bw + az * bx
                z += aw * bz + ax * by - ay * bx + az * bw
            out[i, 0] = w
            out[i, 1] = x
            out[i, 2] = y
            out[i, 3] = z
        s = 0.0
        for i in range(3):
            for c in range(4):
                s += out[i, c] * out[i, c]
        s = np.sqrt(s)
        for i in range(3):
            for c in range(4):
                out[i, c] /= s

    @njit(cache=True)
    def _nb_normalize(v):
        s = np.sqrt(np.sum(v * v))
        return v / s

    @njit(cache=True)
    def _nb_residual(p, r):
        # <p, r> = sum conj(p_i) r_i
        w = 0.0
        x = 0.0
        y = 0.0
        z = 0.0
        for i in range(3):
            aw, ax, ay, az = p[i, 0], -p[i, 1], -p[i, 2], -p[i, 3]
            bw, bx, by, bz = r[i, 0], r[i, 1], r[i, 2], r[i, 3]
            w += aw * bw - ax * bx - ay * by - az * bz
            x += aw * bx + ax * bw + ay * bz - az * by
            y += aw * by - ax * bz + ay * bw + az * bx
            z += aw * bz + ax * by - ay * bx + az * bw
        s = 0.0
        for i in range(3):
            aw, ax, ay, az = p[i, 0], p[i, 1], p[i, 2], p[i, 3]
            d0 = r[i, 0] - (aw * w - ax * x - ay * y - az * z)
            d1 = r[i, 1] - (aw * x + ax * w + ay * z - az * y)
            d2 = r[i, 2] - (aw * y - ax * z + ay * w + az * x)
            d3 = r[i, 3] - (aw * z + ax * y - ay * x + az * w)
            s += d0 * d0 + d1 * d1 + d2 * d2 + d3 * d3
        return np.sqrt(s)

    @njit(cache=True)
    def nb_iterate(M, V, n):
        out = np.empty_like(V)
        tmp = np.empty((3, 4))
        for p in range(V.shape[0]):
            cur = _nb_normalize(V[p].copy())
            for _ in range(n):
                _nb_step(M, cur, tmp)
                cur[:, :] = tmp
            out[p] = cur
        return out

    @njit(cache=True)
    def nb_trace(M, v, n):
        out = np.empty((n + 1, 3, 4))
        out[0] = _nb_normalize(v.copy())
        for k in range(1, n + 1):
            _nb_step(M, out[k - 1], out[k])
        return out

    @njit(cache=True)
    def nb_tail(M, V, n_total, start):
        P = V.shape[0]
        out = np.empty((n_total - start + 1, P, 3, 4))
        tmp = np.empty((3, 4))
        for p in range(P):
            cur = _nb_normalize(V[p].copy())
            for k in range(n_total + 1):
                if k > 0:
                    _nb_step(M, cur, tmp)
                    cur[:, :] = tmp
                if k >= start:
                    out[k - start, p] = cur
        return out

    @njit(cache=True)
    def nb_first_return(M, V, eps, nmax):
        P = V.shape[0]
        found = np.full(P, -1, dtype=np.int64)
        tmp = np.empty((3, 4))
        for p in range(P):
            v0 = _nb_normalize(V[p].copy())
            cur = v0.copy()
            for k in range(1, nmax + 1):
                _nb_step(M, cur, tmp)
                cur[:, :] = tmp
                if _nb_residual(v0, cur) < eps:
                    found[p] = k
                    break
        return found

    @njit(cache=True)
    def nb_s1_max_gap(alpha, n):
        pts = np.empty(n + 1)
        for k in range(n + 1):
            pts[k] = (k * alpha) % 1.0
        pts.sort()
        best = 1.0 - pts[n] + pts[0]
        for k in range(n):
            g = pts[k + 1] - pts[k]
            if g > best:
                best = g
        return best

    @njit(cache=True)
    def nb_t2_first_cover(alpha, beta, m, cap):
        seen = np.zeros(m * m, dtype=np.bool_)
        remaining = m * m
        for k in range(cap + 1):
            a = min(int(((k * alpha) % 1.0) * m), m - 1)
            b = min(int(((k * beta) % 1.0) * m), m - 1)
            c = a * m + b
            if not seen[c]:
                seen[c] = True
                remaining -= 1
                if remaining == 0:
                    return k
        return -1


def _pick(name):
    if USE_NUMBA:
        return globals()["nb_" + name]
    return globals()["np_" + name]


def iterate(M, V, n):
    """Push a batch of vectors (P, 3, 4) through n steps of M."""
    return _pick("iterate")(np.ascontiguousarray(M, dtype=float), np.ascontiguousarray(V, dtype=float), int(n))


def trace(M, v, n):
    return _pick("trace")(np.ascontiguousarray(M, dtype=float), np.ascontiguousarray(v, dtype=float), int(n))


def tail(M, V, n_total, start):
    """Samples k = start..n_total of every orbit, shape (K, P, 3, 4)."""
    return _pick("tail")(
        np.ascontiguousarray(M, dtype=float), np.ascontiguousarray(V, dtype=float), int(n_total), int(start)
    )


def first_return(M, V, eps, nmax):
    """Least k in [1, nmax] with chordal distance < eps to the start, else -1."""
    return _pick("first_return")(
        np.ascontiguousarray(M, dtype=float), np.ascontiguousarray(V, dtype=float), float(eps), int(nmax)
    )


def s1_max_gap(alpha, n):
    """Largest gap, in turns, of {k alpha mod 1 : 0 <= k <= n} on the circle."""
    return float(_pick("s1_max_gap")(float(alpha), int(n)))


def t2_first_cover(alpha, beta, m, cap):
    """Least k at which {(j alpha, j beta) : j <= k} meets every cell of an m x m grid."""
    return int(_pick("t2_first_cover")(float(alpha), float(beta), int(m), int(cap)))
