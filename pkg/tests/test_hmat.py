import numpy as np
import pytest
from hypothesis import given

from qkleinian import hmat, quat
from qkleinian.errors import SingularMatrixError

from conftest import seeds, well_conditioned

J = np.array([0, 0, 1.0, 0])


def test_mat_vec_examples():
    A = hmat.diag(J, 1, 1)
    v = hmat.asvec(np.array([1j, 0, 0]))
    np.testing.assert_allclose(hmat.mat_vec(A, v)[0], [0, 0, 0, -1])
    np.testing.assert_allclose(hmat.mat_mul(hmat.identity(), A), A)


@given(seeds)
def test_right_scaling_commutes_with_action(seed):
    rng = np.random.default_rng(seed)
    A, v, a = rng.standard_normal((3, 3, 4)), rng.standard_normal((3, 4)), rng.standard_normal(4)
    lhs = hmat.mat_vec(A, quat.mul(v, a))
    rhs = quat.mul(hmat.mat_vec(A, v), a)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_phi_examples():
    np.testing.assert_array_equal(hmat.phi_embed(hmat.identity()), np.eye(6))
    A1, A2 = hmat.split(hmat.diag(J, 1, 1))
    np.testing.assert_array_equal(A1, np.diag([0, 1, 1]))
    np.testing.assert_array_equal(A2, np.diag([1, 0, 0]))


@given(seeds)
def test_phi_homomorphism(seed):
    rng = np.random.default_rng(seed)
    A, B = rng.standard_normal((2, 3, 3, 4))
    lhs = hmat.phi_embed(hmat.mat_mul(A, B))
    rhs = hmat.phi_embed(A) @ hmat.phi_embed(B)
    assert np.max(np.abs(lhs - rhs)) <= 1e-10
    np.testing.assert_allclose(hmat.phi_pullback(hmat.phi_embed(A)), A, atol=0)


@given(seeds)
def test_vector_map_intertwines(seed):
    rng = np.random.default_rng(seed)
    A, v = rng.standard_normal((3, 3, 4)), rng.standard_normal((3, 4))
    np.testing.assert_allclose(hmat.phi_embed(A) @ hmat.vec_to_c6(v), hmat.vec_to_c6(hmat.mat_vec(A, v)),
                               atol=1e-12)
    np.testing.assert_allclose(hmat.c6_to_vec(hmat.vec_to_c6(v)), v, atol=0)


@given(seeds)
def test_phi_of_conj_transpose(seed):
    A = np.random.default_rng(seed).standard_normal((3, 3, 4))
    np.testing.assert_allclose(hmat.phi_embed(hmat.conj_transpose(A)), hmat.phi_embed(A).conj().T, atol=1e-14)


def test_det_examples():
    assert hmat.det_h(hmat.identity()) == pytest.approx(1.0)
    assert hmat.det_h(hmat.diag(np.array([1, 1, 1, 1.0]), 1, 1)) == pytest.approx(4.0)
    assert hmat.det_h(hmat.diag(0.5, 1, 2)) == pytest.approx(1.0)


def test_det_of_real_matrix_is_square_of_ordinary_det(rng):
    for _ in range(20):
        M = rng.standard_normal((3, 3))
        assert hmat.det_h(M) == pytest.approx(np.linalg.det(M) ** 2, rel=1e-10)


def test_det_multiplicative_on_many_pairs():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(1000):
        A, B = rng.standard_normal((2, 3, 3, 4))
        dA, dB = hmat.det_h(A), hmat.det_h(B)
        dAB = hmat.det_h(hmat.mat_mul(A, B))
        worst = max(worst, abs(dAB - dA * dB) / max(dA * dB, 1e-300))
    assert worst <= 1e-9


@given(seeds)
def test_det_nonnegative_and_homogeneous(seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((3, 3, 4))
    r = rng.uniform(0.2, 3.0)
    d = hmat.det_h(A)
    assert d >= 0
    assert hmat.det_h(hmat.scale_real(A, r)) == pytest.approx(r ** 6 * d, rel=1e-9, abs=1e-12)


def test_inverse_examples():
    np.testing.assert_allclose(hmat.inverse(hmat.identity()), hmat.identity(), atol=1e-15)
    np.testing.assert_allclose(hmat.inverse(hmat.diag(2, 1, 0.5)), hmat.diag(0.5, 1, 2), atol=1e-15)
    np.testing.assert_allclose(hmat.inverse(hmat.diag(J, 1, 1)), hmat.diag(-J, 1, 1), atol=1e-15)


def test_singular_inverse_carries_det():
    A = hmat.diag(1, 1, 0)
    with pytest.raises(SingularMatrixError) as info:
        hmat.inverse(A)
    assert info.value.det == pytest.approx(0.0)


@given(seeds)
def test_inverse_round_trip(seed):
    A = well_conditioned(np.random.default_rng(seed))
    err = hmat.mat_mul(A, hmat.inverse(A)) - hmat.identity()
    assert hmat.sup_norm(err) <= 1e-10


def test_transpose_examples():
    T = hmat.transpose(hmat.block_diag(hmat.jordan_block(2.0, 2), [[0.25]]))
    assert np.allclose(T[1, 0], [1, 0, 0, 0]) and np.allclose(T[0, 1], 0)
    np.testing.assert_allclose(hmat.conj_transpose(hmat.diag(J, 1, 1)), hmat.diag(-J, 1, 1))


def test_sup_norm():
    assert hmat.sup_norm(hmat.identity()) == 1.0
    assert hmat.sup_norm(hmat.diag(0.5, 1, 2)) == 2.0


@given(seeds)
def test_sup_norm_submultiplicative(seed):
    A, B = np.random.default_rng(seed).standard_normal((2, 3, 3, 4))
    assert hmat.sup_norm(hmat.mat_mul(A, B)) <= 3 * hmat.sup_norm(A) * hmat.sup_norm(B) + 1e-12


def test_normalize_to_sl(rng):
    A = well_conditioned(rng)
    assert hmat.det_h(hmat.normalize_to_sl(A)) == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(SingularMatrixError):
        hmat.normalize_to_sl(np.zeros((3, 3, 4)))


def test_power_is_projectively_repeated_product(rng):
    A = well_conditioned(rng, shift=1.0)
    P = np.eye(3)
    direct = hmat.asmat(P)
    for _ in range(13):
        direct = hmat.mat_mul(A, direct)
    got = hmat.power(A, 13)
    np.testing.assert_allclose(got, direct / hmat.sup_norm(direct), atol=1e-10)
    back = hmat.power(A, -13)
    prod = hmat.mat_mul(got, back)
    np.testing.assert_allclose(prod / prod[0, 0, 0], hmat.identity(), atol=1e-8)
