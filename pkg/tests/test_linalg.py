import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from ccur import DataMatrix, DimensionError, InputError, NumericError, pseudoinverse, truncated_svd
from ccur.linalg import pca_project


def random_matrix(seed, n, p, rank=None):
    g = np.random.default_rng(seed)
    if rank is None:
        return g.standard_normal((n, p))
    return g.standard_normal((n, rank)) @ g.standard_normal((rank, p))


def test_diagonal_svd():
    svd = truncated_svd(np.diag([3.0, 2.0, 1.0]), 2)
    np.testing.assert_allclose(svd.singular_values, [3, 2])
    np.testing.assert_allclose(svd.right_vectors, np.eye(3)[:, :2], atol=1e-15)


def test_identity_svd():
    np.testing.assert_allclose(truncated_svd(np.eye(2), 2).singular_values, [1, 1])


def test_rank_one_svd_sign_convention():
    # X^T X = [[5, 10], [10, 20]] has top eigenpair 25, (1, 2)/sqrt(5)
    svd = truncated_svd([[1, 2], [2, 4]], 1)
    np.testing.assert_allclose(svd.singular_values, [5.0])
    np.testing.assert_allclose(svd.right_vectors[:, 0], np.array([1, 2]) / np.sqrt(5))
    np.testing.assert_allclose(svd.left_vectors[:, 0], np.array([1, 2]) / np.sqrt(5))


def test_sign_tie_goes_to_lowest_index():
    svd = truncated_svd([[1.0, -1.0]], 1)
    v = svd.right_vectors[:, 0]
    assert v[0] > 0 and v[1] < 0
    svd = truncated_svd([[-1.0, 1.0]], 1)
    assert svd.right_vectors[0, 0] > 0


@pytest.mark.parametrize("k", [0, 4, -1])
def test_k_out_of_range(k):
    with pytest.raises(DimensionError):
        truncated_svd(np.ones((3, 3)), k)


def test_non_finite_rejected():
    X = np.eye(3)
    X[1, 2] = np.nan
    with pytest.raises(NumericError, match="row 1, column 2"):
        truncated_svd(X, 1)
    with pytest.raises(NumericError):
        pseudoinverse(np.array([[np.inf, 0.0]]))


def test_k_beyond_rank_gives_orthonormal_completion():
    X = random_matrix(0, 8, 6, rank=2)
    svd = truncated_svd(X, 5)
    assert np.all(svd.singular_values[2:] < 1e-12)
    for Q in (svd.left_vectors, svd.right_vectors):
        assert np.abs(Q.T @ Q - np.eye(5)).max() < 1e-10


@pytest.mark.parametrize("seed", range(10))
def test_eckart_young_residual(seed):
    g = np.random.default_rng(seed)
    n, p = g.integers(2, 51, size=2)
    X = g.standard_normal((n, p))
    full = scipy.linalg.svd(X, compute_uv=False, lapack_driver="gesvd")
    for k in range(1, min(n, p) + 1):
        svd = truncated_svd(X, k)
        resid = np.linalg.norm(X - svd.reconstruct()) ** 2
        expected = np.sum(full[k:] ** 2)
        assert abs(resid - expected) <= 1e-8 * max(expected, np.sum(full ** 2) * 1e-8)
        assert np.all(np.diff(svd.singular_values) <= 0)
        assert np.abs(svd.right_vectors.T @ svd.right_vectors - np.eye(k)).max() < 1e-10
        assert np.abs(svd.left_vectors.T @ svd.left_vectors - np.eye(k)).max() < 1e-10


def test_svd_is_deterministic():
    X = random_matrix(3, 30, 20)
    a, b = truncated_svd(X, 6), truncated_svd(X.copy(), 6)
    assert np.array_equal(a.singular_values, b.singular_values)
    assert np.array_equal(a.left_vectors, b.left_vectors)
    assert np.array_equal(a.right_vectors, b.right_vectors)


def test_pinv_examples():
    np.testing.assert_array_equal(pseudoinverse(np.diag([2.0, 0.0])), np.diag([0.5, 0.0]))
    # (A^T A)^-1 A^T = [2, 4] / 20
    np.testing.assert_allclose(pseudoinverse([[2.0], [4.0]]), [[0.1, 0.2]], rtol=1e-15)
    Z = pseudoinverse(np.zeros((3, 2)))
    assert Z.shape == (2, 3) and not Z.any()


def penrose_residuals(A, P):
    return (
        np.abs(A @ P @ A - A).max(),
        np.abs(P @ A @ P - P).max(),
        np.abs((A @ P).T - A @ P).max(),
        np.abs((P @ A).T - P @ A).max(),
    )


@settings(max_examples=60, deadline=None)
@given(
    n=st.integers(1, 30),
    p=st.integers(1, 30),
    rank=st.integers(0, 30),
    seed=st.integers(0, 2**32 - 1),
)
def test_penrose_conditions(n, p, rank, seed):
    rank = min(rank, n, p)
    g = np.random.default_rng(seed)
    A = g.standard_normal((n, rank)) @ g.standard_normal((rank, p))
    P = pseudoinverse(A)
    assert max(penrose_residuals(A, P)) <= 1e-8


def test_pinv_explicit_tolerance():
    A = np.diag([1.0, 1e-3])
    np.testing.assert_allclose(pseudoinverse(A, tol=1e-2), np.diag([1.0, 0.0]))
    with pytest.raises(NumericError):
        pseudoinverse(A, tol=-1.0)


def test_datamatrix_invariants():
    dm = DataMatrix([[1, 2], [3, 4]], row_labels=["a", "b"], col_labels=["x", "y"])
    assert dm.shape == (2, 2)
    assert not dm.values.flags.writeable
    assert dm.T.row_labels == ["x", "y"]
    assert dm.take_columns([1]).col_labels == ["y"]
    assert dm.take_rows([1]).row_labels == ["b"]
    np.testing.assert_allclose(dm.centered().values.mean(axis=0), 0)
    with pytest.raises(InputError):
        DataMatrix([[1, 2]], col_labels=["x", "x"])
    with pytest.raises(InputError):
        DataMatrix([[1, 2]], row_labels=["a", "b"])
    with pytest.raises(DimensionError):
        DataMatrix(np.zeros((0, 3)))
    with pytest.raises(NumericError):
        DataMatrix([[np.nan]])


def test_datamatrix_accepted_by_kernels():
    dm = DataMatrix(np.diag([3.0, 2.0, 1.0]))
    np.testing.assert_allclose(truncated_svd(dm, 1).singular_values, [3.0])


def test_pca_project_matches_centered_svd():
    X = random_matrix(7, 12, 5)
    coords = pca_project(X, 2)
    Xc = X - X.mean(axis=0)
    _, s, _ = np.linalg.svd(Xc)
    np.testing.assert_allclose(np.linalg.norm(coords, axis=0), s[:2])
    np.testing.assert_allclose(coords.mean(axis=0), 0, atol=1e-12)
    one_col = pca_project(X[:, :1], 2)
    assert one_col.shape == (12, 2) and not one_col[:, 1].any()
