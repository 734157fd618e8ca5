import numpy as np
import pytest
from hypothesis import given

from qkleinian import hmat, quat
from qkleinian.classify import Fine, canonical_form, canonical_specs, classify
from qkleinian.dynamics import iterate_points
from qkleinian.errors import DomainError, SingularMatrixError
from qkleinian.projective import (E1, E2, E3, ProjLine, ProjPoint, apply, canonical, chordal_dist, dual_apply,
                                  dual_matrix, in_complex_line, inner, line_from_polar, line_through,
                                  point_line_dist, proj_point, random_unitary, standard_complex_line)

from conftest import seeds, unit_quats, vectors, well_conditioned

I_, J_, K_ = np.eye(4)[1], np.eye(4)[2], np.eye(4)[3]


def pt(*coords):
    return ProjPoint(np.array([np.asarray(c, dtype=float) if np.ndim(c) else [c, 0, 0, 0] for c in coords]))


def test_proj_point_examples():
    assert proj_point(np.array([[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 5, 0.0]])).isclose(E3)
    assert pt(J_, J_, 0) == pt(1, 1, 0)
    v = np.array([[1, 0, 0, 0], I_, [0, 0, 0, 0]])
    w = quat.mul(v, K_)
    np.testing.assert_allclose(canonical(v), canonical(w), atol=1e-15)
    with pytest.raises(DomainError):
        proj_point(np.zeros((3, 4)))


@given(vectors, unit_quats)
def test_canonical_is_idempotent_and_scale_free(v, a):
    c = canonical(v)
    np.testing.assert_allclose(canonical(c), c, atol=1e-13)
    np.testing.assert_allclose(canonical(quat.mul(v, a)), c, atol=1e-9)


def test_chordal_examples():
    assert chordal_dist(E1, E2) == pytest.approx(1.0)
    assert chordal_dist(pt(1, 1, 0), E1) == pytest.approx(1 / np.sqrt(2))


@given(vectors, vectors, unit_quats, unit_quats)
def test_chordal_ignores_right_scalars(p, q, a, b):
    d = chordal_dist(p, q)
    assert chordal_dist(quat.mul(p, a), quat.mul(q, b)) == pytest.approx(d, abs=1e-9)


@given(vectors, vectors, vectors)
def test_chordal_metric_axioms(p, q, r):
    dpq, dqp = chordal_dist(p, q), chordal_dist(q, p)
    assert 0 <= dpq <= 1
    assert dpq == pytest.approx(dqp, abs=1e-12)
    assert chordal_dist(p, p) <= 1e-7
    assert chordal_dist(p, r) <= dpq + chordal_dist(q, r) + 1e-12


@given(seeds)
def test_unitary_isometry(seed):
    rng = np.random.default_rng(seed)
    U = random_unitary(rng)
    np.testing.assert_allclose(hmat.mat_mul(hmat.conj_transpose(U), U), hmat.identity(), atol=1e-12)
    p, q = rng.standard_normal((2, 3, 4))
    d = chordal_dist(p, q)
    assert chordal_dist(hmat.mat_vec(U, p), hmat.mat_vec(U, q)) == pytest.approx(d, abs=1e-10)


def test_line_through_examples():
    assert line_through(E1, E2).polar.isclose(E3)
    assert line_through(E1, E3).polar.isclose(E2)
    assert line_through(pt(1, 1, 0), E3).polar.isclose(pt(1, -1, 0))
    with pytest.raises(DomainError):
        line_through(pt(1, 1, 0), pt(J_, J_, 0))


def test_point_line_examples(rng):
    L = line_through(E1, E2)
    assert point_line_dist(E3, L) == pytest.approx(1.0)
    assert point_line_dist(pt(1, 0, 1), L) == pytest.approx(1 / np.sqrt(2))
    a, b = L.basis_vectors()
    for _ in range(20):
        x, y = rng.standard_normal((2, 4))
        r = quat.mul(a, x) + quat.mul(b, y)
        assert point_line_dist(r, L) <= 1e-12


@given(seeds)
def test_line_membership_both_ways(seed):
    rng = np.random.default_rng(seed)
    p, q, r = rng.standard_normal((3, 3, 4))
    L = line_through(p, q)
    x, y = rng.standard_normal((2, 4))
    on = quat.mul(L.span[0].vec, x) + quat.mul(L.span[1].vec, y)
    assert point_line_dist(on, L) <= 1e-10
    # a point off the line is at the distance of its component along the polar
    d = point_line_dist(r, L)
    assert d > 0
    proj = r - sum(quat.mul(u, inner(u, r)[None]) for u in L.basis_vectors())
    assert d * np.linalg.norm(r) == pytest.approx(np.linalg.norm(proj), rel=1e-9)


@given(seeds)
def test_polar_is_orthogonal_to_the_line(seed):
    rng = np.random.default_rng(seed)
    L = line_from_polar(ProjPoint(rng.standard_normal((3, 4))))
    for v in L.basis_vectors():
        assert quat.norm(inner(L.polar.vec, v)) <= 1e-10
    for s in L.span:
        assert quat.norm(inner(L.polar.vec, s.vec)) <= 1e-10


def test_in_complex_line_examples():
    assert in_complex_line(pt(1, I_, 0))
    assert not in_complex_line(pt(1, J_, 0))
    assert in_complex_line(pt(J_, K_, 0))
    assert not in_complex_line(pt(1, I_, 1))


def test_complex_span_distance_agrees_with_membership(rng):
    span = standard_complex_line(1, 2)
    for _ in range(20):
        z = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        v = hmat.asvec(np.array([z[0], z[1], 0]))
        assert span.distance(v) <= 1e-12 and in_complex_line(v)
        w = quat.mul(v, rng.standard_normal(4))
        assert span.distance(w) <= 1e-12 and in_complex_line(w)
    assert span.distance(E3) == pytest.approx(1.0)
    assert span.distance(pt(1, J_, 0)) > 0.5


def test_apply_examples():
    assert apply(hmat.diag(0.5, 1, 2), E3).isclose(E3)
    vt = canonical_form(classify(canonical_specs()[Fine.VERTICAL_TRANSLATION]))
    assert apply(vt, pt(1, 1, 1)).isclose(pt(2, 1, 1))
    with pytest.raises(DomainError):
        apply(hmat.diag(1, 1, 0), E3)


@given(seeds)
def test_apply_is_an_action_and_ignores_real_scale(seed):
    rng = np.random.default_rng(seed)
    g, h = well_conditioned(rng), well_conditioned(rng)
    p = ProjPoint(rng.standard_normal((3, 4)))
    assert apply(hmat.mat_mul(g, h), p).isclose(apply(g, apply(h, p)), 1e-9)
    r = rng.uniform(0.1, 5) * rng.choice([-1, 1])
    assert apply(hmat.scale_real(g, r), p).isclose(apply(g, p), 1e-9)


def test_dual_examples():
    g = hmat.diag(0.5, 1, 2)
    assert dual_apply(g, ProjLine(E1)).polar.isclose(E1)
    L = ProjLine(ProjPoint(np.random.default_rng(0).standard_normal((3, 4))))
    assert dual_apply(hmat.identity(), L).isclose(L)
    vt = canonical_form(classify(canonical_specs()[Fine.VERTICAL_TRANSLATION]))
    line = ProjLine(pt(1, 0.3, -0.7))
    step = dual_apply(vt, line)
    assert step.polar.isclose(apply(dual_matrix(vt), line.polar))
    far = iterate_points(dual_matrix(vt), line.polar.vec[None], 10_000)[0]
    assert chordal_dist(far, E2) < 1e-3
    with pytest.raises(SingularMatrixError):
        dual_matrix(hmat.diag(1, 1, 0))


def test_dual_action_keeps_incidence_for_real_diagonal(rng):
    g = hmat.diag(0.5, 1.0, 2.0)
    L = line_from_polar(ProjPoint(rng.standard_normal((3, 4))))
    image = dual_apply(g, L)
    for v in L.basis_vectors():
        assert point_line_dist(apply(g, v), image) <= 1e-10


def test_literal_transpose_is_not_incidence_preserving_for_complex_phases(rng):
    # the literal transpose and the conjugate transpose differ once entries carry phases;
    # only the latter carries the line of a polar to the image line
    g = hmat.diag(0.5 * np.exp(0.4j), 1.0, 2.0 * np.exp(-1.3j))
    n = ProjPoint(hmat.asvec(rng.standard_normal(3) + 1j * rng.standard_normal(3)))
    L = line_from_polar(n)
    literal = dual_apply(g, L)
    hermitian = ProjLine(apply(hmat.conj_transpose(hmat.inverse(g)), n))
    v = L.basis_vectors()[0]
    assert point_line_dist(apply(g, v), hermitian) <= 1e-10
    assert point_line_dist(apply(g, v), literal) > 1e-3
