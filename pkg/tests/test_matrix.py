import numpy as np
import pytest

from src.sylow.algebra.matrix import (
    Mat, alpha_form, batch_flip, batch_form_mask, batch_matmul, batch_unitriangular_inverse, flip_transpose,
    form_predicates, mat_arith, random_invertible, random_mat, skew_identity,
)
from src.sylow.errors import DimensionError, SingularMatrixError


@pytest.mark.parametrize('m', [1, 2, 3, 4])
def test_skew_identity_is_involution(f25, m):
    Q = skew_identity(f25, m)
    assert (Q @ Q).is_identity()


@pytest.mark.parametrize('m', [1, 2, 3, 4])
def test_flip_calculus(f25, rng, m):
    Q = skew_identity(f25, m)
    for _ in range(50):
        B = random_mat(f25, m, rng)
        C = random_mat(f25, m, rng)
        assert B.F == Q @ B.T @ Q
        assert B.F.F == B
        assert (B @ C).F == C.F @ B.F
        # B^F = B <=> QB симметрична <=> BQ симметрична
        S = B + B.F
        assert form_predicates(S, 'persymmetric')
        assert (Q @ S).T == Q @ S
        assert (S @ Q).T == S @ Q
        assert form_predicates(B - B.F, 'skew_persymmetric')


def test_flip_of_inverse(f625, rng):
    for m in (1, 2, 3):
        for _ in range(20):
            A = random_invertible(f625, m, rng)
            assert A.F.inverse() == A.inverse().F
            assert (A @ A.inverse()).is_identity()


def test_flip_entries(f25):
    B = Mat(f25, np.arange(9).reshape(3, 3))
    # (B^F)_{ab} = B_{b'a'}
    assert flip_transpose(B).entries[0, 0] == 8
    assert flip_transpose(B).entries[0, 1] == 5
    assert flip_transpose(B).entries[2, 0] == 6


def test_alpha_csp(f25):
    alpha = np.array([1, 7], dtype=np.int64)
    P = Mat(f25, np.zeros((2, 2), dtype=np.int64))
    assert not form_predicates(P, 'alpha_csp', alpha)
    assert form_predicates(P, 'alpha_csp')
    assert alpha_form(f25, alpha).entries[1, 0] == f25.conj(1)


def test_alpha_csp_zero_matches_conj_skew(f25, rng):
    # Половина проб вида C - conj(C)^F, они conj-кососимметричны
    hits = 0
    for t in range(1000):
        C = Mat(f25, rng.integers(0, 25, size=(3, 3)))
        B = C - C.bar.F if t % 2 else C
        expected = form_predicates(B, 'conj_skew_persymmetric')
        assert form_predicates(B, 'alpha_csp') == expected
        assert form_predicates(B, 'alpha_csp', np.zeros(3, dtype=np.int64)) == expected
        hits += expected
    assert hits >= 500


@pytest.mark.parametrize('kind', ['persymmetric', 'skew_persymmetric', 'conj_skew_persymmetric'])
def test_batch_form_mask(f25, rng, kind):
    A = rng.integers(0, 25, size=(200, 2, 2))
    X = A[::2]
    # Симметризация даёт заведомо подходящие матрицы
    fitted = {
        'persymmetric': lambda: f25.add(X, batch_flip(X)),
        'skew_persymmetric': lambda: f25.sub(X, batch_flip(X)),
        'conj_skew_persymmetric': lambda: f25.sub(X, batch_flip(f25.conj(X))),
    }
    A[::2] = fitted[kind]()
    mask = batch_form_mask(f25, A, kind)
    assert mask[::2].all()
    for t in range(A.shape[0]):
        assert mask[t] == form_predicates(Mat(f25, A[t]), kind)
    with pytest.raises(DimensionError):
        batch_form_mask(f25, A, 'alpha_csp')


def test_batch_operations(f25, rng):
    A = rng.integers(0, 25, size=(30, 3, 3))
    B = rng.integers(0, 25, size=(30, 3, 3))
    product = batch_matmul(f25, A, B)
    for t in range(30):
        assert np.array_equal(product[t], (Mat(f25, A[t]) @ Mat(f25, B[t])).entries)
        assert np.array_equal(batch_flip(A)[t], Mat(f25, A[t]).F.entries)
    L = np.tril(A, -1) + np.eye(3, dtype=np.int64)
    M = batch_unitriangular_inverse(f25, L)
    assert np.all(batch_matmul(f25, L, M) == np.eye(3, dtype=np.int64))


def test_errors(f25):
    with pytest.raises(SingularMatrixError):
        Mat.zeros(f25, 2).inverse()
    with pytest.raises(DimensionError):
        Mat(f25, np.zeros((2, 3), dtype=np.int64))
    with pytest.raises(DimensionError):
        Mat(f25, np.full((2, 2), 25))
    with pytest.raises(DimensionError):
        Mat.identity(f25, 2) @ Mat.identity(f25, 3)
    with pytest.raises(DimensionError):
        mat_arith(Mat.identity(f25, 2), None, 'cube')
