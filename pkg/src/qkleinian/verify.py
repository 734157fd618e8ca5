"""Per-subclass verification suite and the versioned report format."""
import json
import logging
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import hmat, limitsets as ls
from .classify import (Coarse, Fine, HEURISTIC, Irrational, POLYNOMIAL, canonical_form, classify, projective_order)
from .dynamics import (density_check_s1, first_returns, iterate_points, l2_witness, limit_of_powers,
                       sample_points)
from .errors import CapReachedError, DiagnosticError, SchemaError
from .projective import ProjLine, ProjPoint, canonical, dual_matrix, residual

log = logging.getLogger(__name__)

SCHEMA_VERSION = "qkleinian.report/1"

DEFAULT_SAMPLES = 200
DEFAULT_CLUSTER_EPS = 1e-3
GEOMETRIC_ITER, POLYNOMIAL_ITER = 500, 10_000
GEOMETRIC_TOL, POLYNOMIAL_TOL = 1e-6, 1e-3

# points closer than this to Lambda or L0 converge arbitrarily slowly
ORBIT_EXCLUDE_RADIUS = 0.2
WITNESS_TARGETS = 50
WITNESS_TOL = {False: 1e-5, True: 1e-3}
RECURRENCE_EPS, RECURRENCE_N = 1e-2, 100_000
# three phases must return at once for compound types, which needs a wider radius
COMPOUND_RECURRENCE_EPS = 5e-2
DENSITY_EPS = 1e-2
INVARIANCE_TOL = 1e-8
INVARIANCE_SAMPLES = 100
DUAL_SAMPLES = 100
ORDER_TOL = 1e-10

NOTES = [
    "dual limit sets are listed as polar points; each polar names the line it is dual to",
]


@dataclass
class Check:
    name: str
    status: str  # pass | fail | skipped
    measured: float = None
    threshold: float = None
    iterations: int = None
    seed: int = None
    detail: str = ""

    def to_json(self):
        return {"name": self.name, "status": self.status, "measured": _num(self.measured),
                "threshold": _num(self.threshold), "iterations": self.iterations, "seed": self.seed,
                "detail": self.detail}


@dataclass
class VerificationReport:
    spec: dict
    classification: dict
    predictions: dict
    parameters: dict
    checks: list
    timing: dict = field(default_factory=dict)

    @property
    def status(self):
        return "pass" if all(c.status != "fail" for c in self.checks) else "fail"

    def body(self):
        return {"spec": self.spec, "classification": self.classification, "predictions": self.predictions,
                "parameters": self.parameters, "checks": [c.to_json() for c in self.checks],
                "status": self.status, "notes": NOTES}

    def to_json(self):
        return {"schema_version": SCHEMA_VERSION, "body": self.body(), "timing": self.timing}

    def dumps(self):
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


def _num(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else repr(x)


def parse_report(text):
    doc = json.loads(text)
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaError("$.schema_version", f"expected {SCHEMA_VERSION!r}, got {version!r}")
    for key in ("body", "timing"):
        if key not in doc:
            raise SchemaError(f"$.{key}", "missing")
    return doc


def _judge(name, measured, threshold, **kw):
    ok = measured is not None and measured <= threshold
    return Check(name, "pass" if ok else "fail", measured, threshold, **kw)


# ------------------------------------------------------------------ checks

def check_orbit_convergence(cls, g, pred, samples, max_iter, tol, seed):
    if isinstance(pred.L1, (ls.Empty, ls.WholeSpace)):
        return Check("orbit_convergence", "skipped", detail="no attracting L1 to converge to")
    exclude = ls.Union([pred.L0, pred.Lambda])
    V = sample_points(seed, samples, exclude, ORBIT_EXCLUDE_RADIUS)
    worst = 0.0
    for n in (max_iter, -max_iter):
        W = canonical(iterate_points(g, V, n))
        worst = max(worst, float(pred.L1.distance_many(W).max()))
    return _judge("orbit_convergence", worst, tol, iterations=max_iter, seed=seed)


def _kernel_descriptor(k):
    if isinstance(k, ProjPoint):
        return ls.FinitePoints([k])
    if isinstance(k, ProjLine):
        return ls.Lines([k])
    return ls.Empty()


def check_power_kernels(cls, g, seed):
    expected = ls.predict_power_limits(cls)
    if not expected:
        return Check("power_limit_kernels", "skipped", detail="no pseudo-projective limits for this class")
    worst, names = 0.0, []
    rng = np.random.default_rng(seed)
    for direction, lim in sorted(expected.items(), reverse=True):
        for pp in limit_of_powers(g, direction):
            got = _kernel_descriptor(pp.kernel)
            if not ls.same_set(got, lim.kernel, tol=1e-8):
                worst = max(worst, 1.0)
            a = ls.sample_descriptor(got, 20, rng)
            b = ls.sample_descriptor(lim.kernel, 20, rng)
            worst = max(worst, float(lim.kernel.distance_many(a).max()), float(got.distance_many(b).max()))
        names.append(lim.name)
    return _judge("power_limit_kernels", worst, 1e-8, seed=seed, detail="forward/backward " + "/".join(names))


_WITNESS_CLASSES = {Fine.REGULAR_LOXODROMIC, Fine.LOXO_PARABOLIC, Fine.NON_VERTICAL_TRANSLATION,
                    Fine.ELLIPTO_TRANSLATION}


def check_l2_witnesses(cls, pred, seed):
    if cls.fine not in _WITNESS_CLASSES:
        return Check("l2_witnesses", "skipped", detail="no witness construction for this class")
    if cls.fine is Fine.LOXO_PARABOLIC and cls.params["lambda"].modulus <= 1:
        return Check("l2_witnesses", "skipped", detail="witnesses are built for |lambda| > 1")
    rng = np.random.default_rng(seed)
    polynomial, worst, n_last = False, 0.0, 0
    for comp in pred.L2.components():
        for line in comp.lines:
            targets = ls.sample_descriptor(ls.Lines([line]), WITNESS_TARGETS, rng)
            for t in targets:
                seq = l2_witness(cls, t)
                last = seq[-1]
                poly = last.n > 80
                polynomial |= poly
                n_last = max(n_last, last.n)
                worst = max(worst, float(residual(t[None], last.image.vec[None])[0]))
    return _judge("l2_witnesses", worst, WITNESS_TOL[polynomial], iterations=n_last, seed=seed)


def check_recurrence(cls, g, samples, seed):
    f = cls.fine
    if f is Fine.RATIONAL_ELLIPTIC:
        n0 = projective_order(cls)
        V = sample_points(seed, samples)
        W = canonical(iterate_points(g, V, n0))
        return _judge("recurrence", float(residual(V, W).max()), ORDER_TOL, iterations=n0, seed=seed,
                      detail="distance after one projective period")
    if f.coarse is not Coarse.ELLIPTIC:
        return Check("recurrence", "skipped", detail="not elliptic")
    eps = RECURRENCE_EPS if f is Fine.SIMPLE_IRRATIONAL_ELLIPTIC else COMPOUND_RECURRENCE_EPS
    V = sample_points(seed, samples)
    ns = first_returns(g, V, eps, RECURRENCE_N)
    missing = int(np.sum(ns < 0))
    W = canonical(np.stack([iterate_points(g, v[None], int(n))[0] if n > 0 else v for v, n in zip(V, ns)]))
    measured = float(residual(V, W).max()) if not missing else math.inf
    return _judge("recurrence", measured, eps, iterations=int(ns.max()), seed=seed,
                  detail=f"{missing} points without a return up to n = {RECURRENCE_N}")


def check_density(cls):
    angles = [(k, e.angle) for k, e in sorted(cls.params.items()) if isinstance(e.angle, Irrational)]
    if not angles:
        return Check("density", "skipped", detail="no irrational angle")
    worst = 0
    for _, a in angles:
        try:
            worst = max(worst, density_check_s1(a.value, DENSITY_EPS))
        except CapReachedError as exc:
            return Check("density", "fail", math.inf, float(exc.cap), detail=str(exc))
    return Check("density", "pass", float(worst), float(10 ** 7), iterations=worst,
                 detail=f"orbit of every irrational angle is {DENSITY_EPS}-dense on the circle")


def check_dual_convergence(cls, g, samples, budget, tol, seed):
    witnesses = ls.dual_witnesses(cls)
    if not witnesses:
        return Check("dual_convergence", "skipped", detail="no dual limit points")
    worst = 0.0
    for k, w in enumerate(witnesses):
        rng = np.random.default_rng([seed, k])
        Q = rng.standard_normal((samples, 3, 4))
        Q[:, w.chart - 1] = (1.0, 0.0, 0.0, 0.0)
        M = dual_matrix(g) if w.direction > 0 else dual_matrix(hmat.inverse(g))
        W = canonical(iterate_points(M, Q, budget))
        worst = max(worst, float(residual(np.repeat(w.polar.vec[None], samples, 0), W).max()))
    return _judge("dual_convergence", worst, tol, iterations=budget, seed=seed)


def check_invariance(g, pred, seed):
    if isinstance(pred.Lambda, (ls.Empty, ls.WholeSpace)):
        return Check("lambda_invariance", "skipped", detail="Lambda is empty or everything")
    r = ls.descriptor_invariance_check(g, pred.Lambda, INVARIANCE_SAMPLES, INVARIANCE_TOL, seed)
    return _judge("lambda_invariance", r.worst, INVARIANCE_TOL, seed=seed, detail=f"{r.samples} samples")


# ------------------------------------------------------------------ suite

def run_suite(spec, samples=None, max_iter=None, tol=None, cluster_eps=None, seed=0):
    cls = classify(spec)
    poly = cls.fine in POLYNOMIAL
    samples = DEFAULT_SAMPLES if samples is None else samples
    max_iter = (POLYNOMIAL_ITER if poly else GEOMETRIC_ITER) if max_iter is None else max_iter
    tol = (POLYNOMIAL_TOL if poly else GEOMETRIC_TOL) if tol is None else tol
    cluster_eps = DEFAULT_CLUSTER_EPS if cluster_eps is None else cluster_eps
    # predictions live in canonical coordinates, so the checks run on the canonical form
    g = canonical_form(cls)
    pred = ls.predict_kulkarni(cls)
    dual = ls.predict_conze_guivarch(cls)

    steps = [
        ("orbit_convergence", lambda: check_orbit_convergence(cls, g, pred, samples, max_iter, tol, seed)),
        ("power_limit_kernels", lambda: check_power_kernels(cls, g, seed)),
        ("l2_witnesses", lambda: check_l2_witnesses(cls, pred, seed)),
        ("recurrence", lambda: check_recurrence(cls, g, min(samples, 100), seed)),
        ("density", lambda: check_density(cls)),
        ("dual_convergence", lambda: check_dual_convergence(cls, g, min(samples, DUAL_SAMPLES), max_iter, tol, seed)),
        ("lambda_invariance", lambda: check_invariance(g, pred, seed)),
    ]
    checks, timing = [], {}
    for name, fn in steps:
        t0 = time.perf_counter()
        try:
            c = fn()
        except DiagnosticError as exc:
            c = Check(name, "fail", detail=f"diagnostic: {exc}", seed=seed)
        timing[name] = round(time.perf_counter() - t0, 6)
        log.info("%s: %s (measured %s, threshold %s)", name, c.status, c.measured, c.threshold)
        checks.append(c)

    return VerificationReport(
        spec=spec.to_json(),
        classification=cls.to_json(),
        predictions={"kulkarni": ls.prediction_to_json(pred), "dual": ls.dual_to_json(dual)},
        parameters={"samples": samples, "max_iter": max_iter, "tol": tol, "cluster_eps": cluster_eps,
                    "seed": seed, "heuristic": cls.provenance == HEURISTIC},
        checks=checks, timing=timing)
