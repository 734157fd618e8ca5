import json

import numpy as np
import pytest
from hypothesis import given

from qkleinian import hmat
from qkleinian import limitsets as ls
from qkleinian.classify import Fine, canonical_form, canonical_specs, classify, eig, structured, Rational
from qkleinian.dynamics import iterate_points, limit_of_powers
from qkleinian.projective import (E1, E2, E3, ComplexSpan, ProjLine, ProjPoint, canonical, inner,
                                  standard_complex_line)
from qkleinian import quat

from conftest import seeds

SPECS = canonical_specs()
ALL = list(Fine)


def cls_of(fine):
    return classify(SPECS[fine])


def pt(*c):
    return ProjPoint(hmat.asvec(np.array(c, dtype=complex)))


def line(i, j):
    return ls.Lines([ProjLine(ProjPoint(np.eye(3)[6 - i - j - 1]), (ProjPoint(np.eye(3)[i - 1]),
                                                                    ProjPoint(np.eye(3)[j - 1])))])


def points(*ix):
    return ls.FinitePoints([pt(*np.eye(3)[i - 1]) for i in ix])


@pytest.mark.parametrize("fine", ALL, ids=lambda f: f.value)
def test_lambda_is_union_of_l0_l1_l2(fine):
    k = ls.predict_kulkarni(cls_of(fine))
    assert ls.same_set(k.Lambda, ls.Union([k.L0, k.L1, k.L2]))


@pytest.mark.parametrize("fine", ALL, ids=lambda f: f.value)
def test_predictions_round_trip(fine):
    cls = cls_of(fine)
    k = ls.predict_kulkarni(cls)
    text = json.dumps(ls.prediction_to_json(k))
    back = ls.prediction_from_json(json.loads(text))
    for name in ("L0", "L1", "L2", "Lambda"):
        assert ls.descriptors_close(getattr(k, name), getattr(back, name)), name
    dual = ls.predict_conze_guivarch(cls)
    again = ls.dual_from_json(json.loads(json.dumps(ls.dual_to_json(dual))))
    assert again.kind == dual.kind and all(a.isclose(b) for a, b in zip(again.polars, dual.polars))


@pytest.mark.parametrize("fine", ALL, ids=lambda f: f.value)
def test_lambda_is_invariant(fine):
    cls = cls_of(fine)
    k = ls.predict_kulkarni(cls)
    r = ls.descriptor_invariance_check(canonical_form(cls), k.Lambda, samples=100, tol=1e-8)
    assert r.ok, r.worst
    ident = ls.descriptor_invariance_check(hmat.identity(), k.Lambda)
    assert ident.ok and ident.worst == 0


def test_invariance_reports_worst_offender():
    r = ls.descriptor_invariance_check(hmat.asmat(np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1.0]])), points(1, 3))
    assert not r and r.worst == pytest.approx(1.0) and r.worst_point.isclose(E1)


def test_table_examples():
    empty = ls.predict_kulkarni(cls_of(Fine.RATIONAL_ELLIPTIC))
    assert all(isinstance(getattr(empty, n), ls.Empty) for n in ("L0", "L1", "L2", "Lambda"))
    screw = ls.predict_kulkarni(cls_of(Fine.SCREW))
    assert ls.same_set(screw.L0, points(1, 2, 3))
    lam = ls.Union([line(1, 2), points(3)])
    for n in ("L1", "L2", "Lambda"):
        assert ls.same_set(getattr(screw, n), lam)
    vt = ls.predict_kulkarni(cls_of(Fine.VERTICAL_TRANSLATION))
    assert ls.same_set(vt.L0, line(1, 3)) and ls.same_set(vt.L1, points(1)) and ls.same_set(vt.L2, points(1))
    reg = ls.predict_kulkarni(cls_of(Fine.REGULAR_LOXODROMIC))
    assert ls.same_set(reg.Lambda, ls.Union([line(1, 2), line(2, 3)]))
    lp = ls.predict_kulkarni(cls_of(Fine.LOXO_PARABOLIC))
    assert ls.same_set(lp.Lambda, ls.Union([line(1, 2), line(1, 3)]))
    assert not ls.same_set(lp.Lambda, reg.Lambda)


def test_homothety_l0_branches_on_lambda():
    real = ls.predict_kulkarni(cls_of(Fine.HOMOTHETY_REAL))
    cplx = ls.predict_kulkarni(cls_of(Fine.HOMOTHETY_COMPLEX))
    assert ls.same_set(real.L0, ls.Union([points(3), line(1, 2)]))
    assert any(isinstance(c, ls.ComplexLine) for c in cplx.L0.components())
    assert ls.descriptor_dist(pt(1, 1j, 0), cplx.L0) < 1e-12
    jpt = ProjPoint(np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0.0]]))
    assert ls.descriptor_dist(jpt, cplx.L0) > 0.5 and ls.descriptor_dist(jpt, real.L0) < 1e-12
    assert '"complex_line"' in json.dumps(ls.prediction_to_json(cplx))


def test_elliptic_rows():
    simple = ls.predict_kulkarni(cls_of(Fine.SIMPLE_IRRATIONAL_ELLIPTIC))
    assert isinstance(simple.L0, ls.ComplexPlaneP2C) and isinstance(simple.Lambda, ls.WholeSpace)
    assert ls.descriptor_dist(pt(1, 2j, -1), simple.L0) < 1e-12
    jpt = ProjPoint(np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0.0]]))
    assert ls.descriptor_dist(jpt, simple.L0) > 0.5
    c1 = ls.predict_kulkarni(cls_of(Fine.COMPOUND_I))
    assert isinstance(c1.L0, ls.FixedPointSet)
    g = canonical_form(cls_of(Fine.COMPOUND_I))
    assert ls.descriptor_invariance_check(g, c1.L0).ok


def test_descriptor_distance_examples():
    assert ls.descriptor_dist(E1, points(1, 3)) == 0
    assert ls.descriptor_dist(pt(1, 0, 1), line(1, 2)) == pytest.approx(1 / np.sqrt(2))
    assert ls.descriptor_dist(pt(3, -1, 2), ls.WholeSpace()) == 0
    assert ls.descriptor_dist(E1, ls.Empty()) == np.inf
    u = ls.Union([line(1, 2), points(3)])
    assert ls.descriptor_dist(pt(1, 0, 1), u) == pytest.approx(1 / np.sqrt(2))


@given(seeds)
def test_complex_line_distance_is_the_infimum(seed):
    rng = np.random.default_rng(seed)
    d = ls.ComplexLine(standard_complex_line(1, 2))
    v = canonical(rng.standard_normal((3, 4)))
    got = ls.descriptor_dist(v, d)
    # brute force over complex points of the line
    z = rng.standard_normal((4000, 2)) + 1j * rng.standard_normal((4000, 2))
    pts = canonical(hmat.asvec(np.concatenate([z, np.zeros((4000, 1))], axis=1)))
    from qkleinian.projective import residual
    assert got <= residual(pts, v[None]).min() + 1e-12
    assert got >= ls.descriptor_dist(v, line(1, 2)) - 1e-12


def test_duality_consistency():
    for fine in ALL:
        dual = ls.predict_conze_guivarch(cls_of(fine))
        for L in dual.lines():
            for v in L.basis_vectors():
                assert quat.norm(inner(L.polar.vec, v)) <= 1e-10


def test_dual_table_examples():
    vt = ls.predict_conze_guivarch(cls_of(Fine.VERTICAL_TRANSLATION))
    assert vt.kind == "points" and len(vt.polars) == 1 and vt.polars[0].isclose(E2)
    reg = ls.predict_conze_guivarch(cls_of(Fine.REGULAR_LOXODROMIC))
    assert sorted(int(np.argmax(np.abs(p.vec[:, 0]))) for p in reg.polars) == [0, 2]
    lp = ls.predict_conze_guivarch(cls_of(Fine.LOXO_PARABOLIC))
    assert sorted(int(np.argmax(np.abs(p.vec[:, 0]))) for p in lp.polars) == [1, 2]
    assert ls.predict_conze_guivarch(cls_of(Fine.SIMPLE_IRRATIONAL_ELLIPTIC)).kind == "whole"
    assert ls.predict_conze_guivarch(cls_of(Fine.RATIONAL_ELLIPTIC)).kind == "empty"


def test_contracting_generators_swap_power_limits():
    screw = structured("screw", **{"lambda": eig(0.5, Rational(1, 4)), "mu": eig(0.5), "xi": eig(4.0)})
    cls = classify(screw)
    pred = ls.predict_power_limits(cls)
    assert pred[1].name == "D1" and pred[-1].name == "D3"
    g = canonical_form(cls)
    for direction, lim in pred.items():
        for pp in limit_of_powers(g, direction):
            got = ls.FinitePoints([pp.kernel]) if isinstance(pp.kernel, ProjPoint) else ls.Lines([pp.kernel])
            assert ls.same_set(got, lim.kernel)
    w = ls.dual_witnesses(cls)
    assert w[0].direction == -1


def test_set_algebra():
    assert ls.same_set(ls.Union([line(1, 2), points(1, 2)]), line(1, 2))
    assert not ls.same_set(line(1, 2), line(1, 3))
    span = ls.ComplexLine(standard_complex_line(1, 2))
    assert ls.same_set(ls.Union([line(1, 2), span]), line(1, 2))
    assert not ls.same_set(span, line(1, 2))
    assert ls.same_set(ls.Union([ls.WholeSpace(), points(1)]), ls.WholeSpace())


def test_descriptor_json_shapes():
    doc = ls.descriptor_to_json(ls.Union([line(1, 2), points(3)]))
    assert doc == {"type": "union", "members": [{"type": "line", "polar": "e3", "span": ["e1", "e2"]},
                                                {"type": "points", "points": ["e3"]}]}
    back = ls.descriptor_from_json({"type": "line", "span": ["e1", "e3"]})
    assert back.lines[0].polar.isclose(E2)
    with pytest.raises(Exception):
        ls.descriptor_from_json({"type": "mystery"})


def test_every_orbit_cluster_lies_in_lambda():
    rng = np.random.default_rng(3)
    V = canonical(rng.standard_normal((50, 3, 4)))
    for fine in (Fine.REGULAR_LOXODROMIC, Fine.SCREW, Fine.HOMOTHETY_COMPLEX, Fine.LOXO_PARABOLIC,
                 Fine.NON_VERTICAL_TRANSLATION):
        cls = cls_of(fine)
        g = canonical_form(cls)
        lam = ls.predict_kulkarni(cls).Lambda
        n = 400 if fine is not Fine.LOXO_PARABOLIC and fine is not Fine.NON_VERTICAL_TRANSLATION else 20_000
        for s in (n, -n):
            assert lam.distance_many(canonical(iterate_points(g, V, s))).max() < 1e-3


def test_invariance_samples_every_listed_component():
    swap = hmat.asmat(np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1.0]]))
    assert not ls.descriptor_invariance_check(swap, points(3, 1))
    assert not ls.descriptor_invariance_check(swap, ls.Lines(line(1, 2).lines + line(2, 3).lines))
