"""Limit-set descriptors and the closed-form predictions per subclass.

Descriptors are symbolic subsets of the quaternionic projective plane. Each
one can measure the chordal distance from points to itself, which is how the
numerical campaigns compare orbits with predictions.
"""
from dataclasses import dataclass

import numpy as np

from . import hmat, spectra
from .classify import Coarse, Fine, canonical_form
from .projective import (E1, E2, E3, ComplexSpan, ProjLine, ProjPoint, basis, canonical, standard_complex_line,
                         standard_complex_plane)
from .errors import SchemaError

_BASIS = {"e1": E1, "e2": E2, "e3": E3}


def _line(i, j):
    k = 6 - i - j
    return ProjLine(basis(k), (basis(i), basis(j)))


# ------------------------------------------------------------------ descriptors

class Descriptor:
    def distance_many(self, V):
        raise NotImplementedError

    def components(self):
        return [self]

    def __or__(self, other):
        return Union([self, other])


class Empty(Descriptor):
    def distance_many(self, V):
        return np.full(len(V), np.inf)

    def components(self):
        return []

    def __repr__(self):
        return "Empty()"


class WholeSpace(Descriptor):
    def distance_many(self, V):
        return np.zeros(len(V))

    def __repr__(self):
        return "WholeSpace()"


class FinitePoints(Descriptor):
    def __init__(self, points):
        self.points = list(points)

    def distance_many(self, V):
        from .projective import residual
        V = canonical(V)
        return np.min([residual(p.vec, V) for p in self.points], axis=0)

    def components(self):
        return [FinitePoints([p]) for p in self.points]

    def __repr__(self):
        return f"FinitePoints({self.points})"


class Lines(Descriptor):
    def __init__(self, lines):
        self.lines = list(lines)

    def distance_many(self, V):
        from . import quat
        from .projective import inner
        V = canonical(V)
        return np.min([quat.norm(inner(L.polar.vec, V)) for L in self.lines], axis=0)

    def components(self):
        return [Lines([L]) for L in self.lines]

    def __repr__(self):
        return f"Lines({self.lines})"


class ComplexLine(Descriptor):
    """A complex projective line given by two spanning vectors."""

    def __init__(self, span):
        self.span = span if isinstance(span, ComplexSpan) else ComplexSpan(span)

    def distance_many(self, V):
        return self.span.distance_many(canonical(V))

    def __repr__(self):
        return "ComplexLine(...)"


class ComplexPlaneP2C(Descriptor):
    """The standard complex projective plane, coordinates in span{1, i}."""

    def __init__(self):
        self.span = standard_complex_plane()

    def distance_many(self, V):
        return self.span.distance_many(canonical(V))

    def __repr__(self):
        return "ComplexPlaneP2C()"


class FixedPointSet(Descriptor):
    def __init__(self, fixed):
        self.fixed = fixed
        self.members = [_from_fixed_component(c) for c in fixed.components]

    def distance_many(self, V):
        return Union(self.members).distance_many(V)

    def components(self):
        return [c for m in self.members for c in m.components()]

    def __repr__(self):
        return f"FixedPointSet({self.members})"


class Union(Descriptor):
    def __init__(self, members):
        self.members = [m for m in members if not isinstance(m, Empty)]

    def distance_many(self, V):
        if not self.members:
            return np.full(len(V), np.inf)
        return np.min([m.distance_many(V) for m in self.members], axis=0)

    def components(self):
        return [c for m in self.members for c in m.components()]

    def __repr__(self):
        return f"Union({self.members})"


def _from_fixed_component(c):
    if isinstance(c, ProjPoint):
        return FinitePoints([c])
    if isinstance(c, ProjLine):
        return Lines([c])
    if isinstance(c, ComplexSpan):
        return ComplexLine(c) if c.dim == 2 else _plane_from_span(c)
    return WholeSpace()


class _Plane(Descriptor):
    def __init__(self, span):
        self.span = span

    def distance_many(self, V):
        return self.span.distance_many(canonical(V))


def _plane_from_span(span):
    std = standard_complex_plane()
    if std.isclose(span):
        return ComplexPlaneP2C()
    return _Plane(span)


def descriptor_dist(p, d):
    v = p.vec if isinstance(p, ProjPoint) else np.asarray(p, dtype=float)
    return float(d.distance_many(v[None])[0])


# ------------------------------------------------------------------ set algebra

def _component_contains(big, small, tol):
    if isinstance(big, WholeSpace):
        return True
    if isinstance(small, WholeSpace):
        return False
    if isinstance(small, FinitePoints):
        return bool(big.distance_many(small.points[0].vec[None])[0] <= tol)
    if isinstance(small, Lines):
        if not isinstance(big, Lines):
            return False
        return small.lines[0].isclose(big.lines[0], tol)
    span = small.span
    if isinstance(big, FinitePoints):
        return False
    return bool(np.max(big.distance_many(canonical(span.vectors))) <= tol and
                (not isinstance(big, (ComplexLine,)) or span.dim <= 2) and
                _span_inside(big, span, tol))


def _span_inside(big, span, tol):
    # test a few generic complex combinations as well as the generators
    rng = np.random.default_rng(12345)
    coef = rng.standard_normal((8, span.dim)) + 1j * rng.standard_normal((8, span.dim))
    from .quat import from_complex, mul
    pts = np.zeros((8, 3, 4))
    for k in range(span.dim):
        pts += mul(span.vectors[k][None], from_complex(coef[:, k])[:, None, :])
    return bool(np.max(big.distance_many(canonical(pts))) <= tol)


def simplify(d, tol=1e-9):
    """Flattened, absorbed list of components: no component inside another."""
    comps = d.components()
    keep = []
    for i, c in enumerate(comps):
        absorbed = False
        for j, other in enumerate(comps):
            if i == j:
                continue
            inside = _component_contains(other, c, tol)
            if inside and (not _component_contains(c, other, tol) or j < i):
                absorbed = True
                break
        if not absorbed:
            keep.append(c)
    return keep


def same_set(a, b, tol=1e-9):
    """Set-level equality of descriptors after flattening and absorption."""
    ca, cb = simplify(a, tol), simplify(b, tol)
    if len(ca) != len(cb):
        return False
    return all(any(_component_contains(y, x, tol) and _component_contains(x, y, tol) for y in cb) for x in ca)


# ------------------------------------------------------------------ predictions

@dataclass
class KulkarniPrediction:
    L0: Descriptor
    L1: Descriptor
    L2: Descriptor
    Lambda: Descriptor
    Omega: str = "complement of Lambda"


@dataclass
class DualDescriptor:
    kind: str  # "empty" | "points" | "whole"
    polars: tuple = ()

    def lines(self):
        return [ProjLine(p) for p in self.polars]


@dataclass(frozen=True)
class DualWitness:
    """A predicted dual limit point with the chart and direction that reach it."""
    polar: ProjPoint
    chart: int
    direction: int  # +1: iterate the dual action of g, -1: of g^{-1}
    polynomial: bool


@dataclass(frozen=True)
class PowerLimit:
    name: str
    kernel: Descriptor


POWER_LIMITS = {
    "D1": lambda: Lines([_line(1, 2)]),
    "D2": lambda: Lines([_line(2, 3)]),
    "D3": lambda: FinitePoints([E3]),
    "D4": lambda: Lines([_line(1, 3)]),
    "D5": lambda: Lines([_line(1, 2)]),
}

_POWER_TABLE = {
    Fine.REGULAR_LOXODROMIC: ("D1", "D2"),
    Fine.SCREW: ("D3", "D1"),
    Fine.HOMOTHETY_REAL: ("D3", "D1"),
    Fine.HOMOTHETY_COMPLEX: ("D3", "D1"),
    Fine.LOXO_PARABOLIC: ("D4", "D1"),
    Fine.VERTICAL_TRANSLATION: ("D4", "D4"),
    Fine.NON_VERTICAL_TRANSLATION: ("D5", "D5"),
    Fine.RATIONAL_ELLIPTO_PARABOLIC: ("D4", "D4"),
    Fine.IRRATIONAL_ELLIPTO_PARABOLIC: ("D4", "D4"),
    Fine.ELLIPTO_TRANSLATION: ("D5", "D5"),
}

_SWAP_WHEN_CONTRACTING = {Fine.SCREW, Fine.HOMOTHETY_REAL, Fine.HOMOTHETY_COMPLEX, Fine.LOXO_PARABOLIC}


def _swapped(cls):
    return cls.fine in _SWAP_WHEN_CONTRACTING and cls.params["lambda"].modulus < 1.0


def predict_power_limits(cls):
    """Expected limits of renormalized powers as {direction: PowerLimit}."""
    names = _POWER_TABLE.get(cls.fine)
    if names is None:
        return {}
    fwd, bwd = names
    if _swapped(cls):
        fwd, bwd = bwd, fwd
    return {+1: PowerLimit(fwd, POWER_LIMITS[fwd]()), -1: PowerLimit(bwd, POWER_LIMITS[bwd]())}


def predict_kulkarni(cls):
    f = cls.fine
    pts = lambda *ix: FinitePoints([basis(i) for i in ix])  # noqa: E731
    ln = lambda *pairs: Lines([_line(i, j) for i, j in pairs])  # noqa: E731
    empty, whole = Empty(), WholeSpace()
    if f is Fine.RATIONAL_ELLIPTIC:
        return KulkarniPrediction(empty, empty, empty, empty)
    if f is Fine.SIMPLE_IRRATIONAL_ELLIPTIC:
        return KulkarniPrediction(ComplexPlaneP2C(), whole, empty, whole)
    if f.coarse is Coarse.ELLIPTIC:
        fixed = FixedPointSet(spectra.fixed_points(canonical_form(cls)))
        return KulkarniPrediction(fixed, whole, empty, whole)
    if f is Fine.REGULAR_LOXODROMIC:
        lam = Union([ln((1, 2)), ln((2, 3))])
        return KulkarniPrediction(pts(1, 2, 3), pts(1, 2, 3), lam, lam)
    if f is Fine.SCREW:
        lam = Union([ln((1, 2)), pts(3)])
        return KulkarniPrediction(pts(1, 2, 3), lam, lam, lam)
    if f in (Fine.HOMOTHETY_REAL, Fine.HOMOTHETY_COMPLEX):
        plane = ln((1, 2)) if f is Fine.HOMOTHETY_REAL else ComplexLine(standard_complex_line(1, 2))
        lam = Union([ln((1, 2)), pts(3)])
        return KulkarniPrediction(Union([pts(3), plane]), lam, lam, lam)
    if f is Fine.LOXO_PARABOLIC:
        lam = Union([ln((1, 2)), ln((1, 3))])
        return KulkarniPrediction(pts(1, 3), pts(1, 3), lam, lam)
    if f in (Fine.VERTICAL_TRANSLATION, Fine.RATIONAL_ELLIPTO_PARABOLIC):
        return KulkarniPrediction(ln((1, 3)), pts(1), pts(1), ln((1, 3)))
    if f is Fine.IRRATIONAL_ELLIPTO_PARABOLIC:
        return KulkarniPrediction(pts(1, 3), ln((1, 3)), pts(1), ln((1, 3)))
    # non-vertical translation and ellipto-translation
    return KulkarniPrediction(pts(1), pts(1), ln((1, 2)), ln((1, 2)))


def dual_witnesses(cls):
    f = cls.fine
    if f.coarse is Coarse.ELLIPTIC:
        return []
    if f is Fine.REGULAR_LOXODROMIC:
        return [DualWitness(E1, 1, +1, False), DualWitness(E3, 3, -1, False)]
    s = -1 if _swapped(cls) else 1
    if f in (Fine.SCREW, Fine.HOMOTHETY_REAL, Fine.HOMOTHETY_COMPLEX):
        return [DualWitness(E3, 3, s, False)]
    if f is Fine.LOXO_PARABOLIC:
        return [DualWitness(E3, 3, s, False), DualWitness(E2, 1, -s, True)]
    if f in (Fine.VERTICAL_TRANSLATION, Fine.RATIONAL_ELLIPTO_PARABOLIC, Fine.IRRATIONAL_ELLIPTO_PARABOLIC):
        return [DualWitness(E2, 1, +1, True)]
    return [DualWitness(E3, 1, +1, True)]


def predict_conze_guivarch(cls):
    if cls.fine is Fine.RATIONAL_ELLIPTIC:
        return DualDescriptor("empty")
    if cls.fine.coarse is Coarse.ELLIPTIC:
        return DualDescriptor("whole")
    return DualDescriptor("points", tuple(w.polar for w in dual_witnesses(cls)))


# ------------------------------------------------------------------ invariance

@dataclass
class InvarianceResult:
    ok: bool
    worst: float
    worst_point: object
    samples: int

    def __bool__(self):
        return self.ok


def sample_descriptor(d, samples, rng):
    """Points on each component: the listed points, or random combinations."""
    from . import quat
    out = []
    for c in d.components():
        if isinstance(c, FinitePoints):
            for p in c.points:
                out.append(np.repeat(p.vec[None], samples, axis=0))
        elif isinstance(c, Lines):
            for L in c.lines:
                a, b = L.basis_vectors()
                q = rng.standard_normal((samples, 2, 4))
                out.append(quat.mul(a[None], q[:, None, 0]) + quat.mul(b[None], q[:, None, 1]))
        elif isinstance(c, (ComplexLine, ComplexPlaneP2C, _Plane)):
            span = c.span
            coef = rng.standard_normal((samples, span.dim, 2))
            pts = np.zeros((samples, 3, 4))
            for k in range(span.dim):
                z = quat.from_complex(coef[:, k, 0] + 1j * coef[:, k, 1])
                pts += quat.mul(span.vectors[k][None], z[:, None, :])
            out.append(pts)
        elif isinstance(c, WholeSpace):
            out.append(rng.standard_normal((samples, 3, 4)))
    return canonical(np.concatenate(out)) if out else np.zeros((0, 3, 4))


def descriptor_invariance_check(g, d, samples=100, tol=1e-8, seed=0):
    """Sample d, push the samples through g and measure the distance back to d."""
    pts = sample_descriptor(d, samples, np.random.default_rng(seed))
    if len(pts) == 0:
        return InvarianceResult(True, 0.0, None, 0)
    images = hmat.mat_vec(hmat.asmat(g), pts)
    dist = d.distance_many(canonical(images))
    k = int(np.argmax(dist))
    return InvarianceResult(bool(dist[k] <= tol), float(dist[k]), ProjPoint(pts[k]), len(pts))


# ------------------------------------------------------------------ serialization

def point_to_json(p):
    for name, e in _BASIS.items():
        if np.array_equal(p.vec, e.vec):
            return name
    return p.vec.tolist()


def point_from_json(x):
    if isinstance(x, str):
        try:
            return _BASIS[x]
        except KeyError:
            raise SchemaError("$", f"unknown basis point {x!r}") from None
    return ProjPoint(np.array(x, dtype=float))


def _line_to_json(L):
    return {"polar": point_to_json(L.polar), "span": [point_to_json(p) for p in L.span]}


def _line_from_json(d):
    from .projective import line_through
    span = [point_from_json(p) for p in d["span"]]
    if "polar" in d:
        return ProjLine(point_from_json(d["polar"]), tuple(span))
    return line_through(*span)


def descriptor_to_json(d):
    if isinstance(d, Empty):
        return {"type": "empty"}
    if isinstance(d, WholeSpace):
        return {"type": "whole"}
    if isinstance(d, FinitePoints):
        return {"type": "points", "points": [point_to_json(p) for p in d.points]}
    if isinstance(d, Lines):
        if len(d.lines) == 1:
            return {"type": "line", **_line_to_json(d.lines[0])}
        return {"type": "lines", "lines": [_line_to_json(L) for L in d.lines]}
    if isinstance(d, ComplexLine):
        return {"type": "complex_line", "span": [point_to_json(ProjPoint(v)) if _is_basis(v) else v.tolist()
                                                  for v in d.span.vectors]}
    if isinstance(d, ComplexPlaneP2C):
        return {"type": "complex_plane"}
    if isinstance(d, _Plane):
        return {"type": "complex_span", "span": [v.tolist() for v in d.span.vectors]}
    if isinstance(d, FixedPointSet):
        return {"type": "fixed_points", "components": [descriptor_to_json(m) for m in d.members]}
    if isinstance(d, Union):
        return {"type": "union", "members": [descriptor_to_json(m) for m in d.members]}
    raise TypeError(f"cannot serialize {d!r}")


def _is_basis(v):
    return any(np.array_equal(np.asarray(v), e.vec) for e in _BASIS.values())


def _vector_from_json(x):
    return point_from_json(x).vec if isinstance(x, str) else np.array(x, dtype=float)


def descriptor_from_json(d):
    t = d.get("type")
    if t == "empty":
        return Empty()
    if t == "whole":
        return WholeSpace()
    if t == "points":
        return FinitePoints([point_from_json(p) for p in d["points"]])
    if t == "line":
        return Lines([_line_from_json(d)])
    if t == "lines":
        return Lines([_line_from_json(L) for L in d["lines"]])
    if t == "complex_line":
        return ComplexLine([_vector_from_json(v) for v in d["span"]])
    if t == "complex_plane":
        return ComplexPlaneP2C()
    if t == "complex_span":
        return _Plane(ComplexSpan([_vector_from_json(v) for v in d["span"]]))
    if t == "fixed_points":
        members = [descriptor_from_json(m) for m in d["components"]]
        fps = FixedPointSet(spectra.FixedSet([]))
        fps.members = members
        return fps
    if t == "union":
        return Union([descriptor_from_json(m) for m in d["members"]])
    raise SchemaError("$.type", f"unknown descriptor type {t!r}")


def dual_to_json(dd):
    if dd.kind == "points":
        return {"type": "dual_points", "polars": [point_to_json(p) for p in dd.polars]}
    return {"type": {"empty": "empty", "whole": "whole_dual"}[dd.kind]}


def dual_from_json(d):
    t = d.get("type")
    if t == "empty":
        return DualDescriptor("empty")
    if t == "whole_dual":
        return DualDescriptor("whole")
    if t == "dual_points":
        return DualDescriptor("points", tuple(point_from_json(p) for p in d["polars"]))
    raise SchemaError("$.type", f"unknown dual descriptor type {t!r}")


def prediction_to_json(k):
    return {"L0": descriptor_to_json(k.L0), "L1": descriptor_to_json(k.L1), "L2": descriptor_to_json(k.L2),
            "Lambda": descriptor_to_json(k.Lambda), "Omega": k.Omega}


def prediction_from_json(d):
    return KulkarniPrediction(*(descriptor_from_json(d[k]) for k in ("L0", "L1", "L2", "Lambda")),
                              d.get("Omega", "complement of Lambda"))


def descriptors_close(a, b, tol=1e-12):
    """Structural equality of two descriptors up to tol."""
    if type(a) is not type(b):
        return False
    if isinstance(a, (Empty, WholeSpace, ComplexPlaneP2C)):
        return True
    if isinstance(a, FinitePoints):
        return len(a.points) == len(b.points) and all(p.isclose(q, tol) for p, q in zip(a.points, b.points))
    if isinstance(a, Lines):
        return len(a.lines) == len(b.lines) and all(p.isclose(q, tol) for p, q in zip(a.lines, b.lines))
    if isinstance(a, (ComplexLine, _Plane)):
        return a.span.isclose(b.span, max(tol, 1e-9))
    ma = a.members
    mb = b.members
    return len(ma) == len(mb) and all(descriptors_close(x, y, tol) for x, y in zip(ma, mb))
