import warnings

import numpy as np
import pytest
from sklearn.decomposition import PCA

from ccur import CPCAFeatureRanker, CpcaConfig, DegenerateError, DimensionError, NumericError, cpca_rank_features
from ccur.baselines import NonPositiveContrastWarning


def test_identical_groups_are_degenerate():
    X = np.random.default_rng(0).standard_normal((20, 5))
    with pytest.raises(DegenerateError):
        cpca_rank_features(X, X.copy(), CpcaConfig(alpha=1.0, num_features=3))


def test_high_variance_foreground_column_first():
    g = np.random.default_rng(1)
    X = g.standard_normal((4000, 6))
    X[:, 0] *= np.sqrt(10.0)
    Y = g.standard_normal((4000, 6))
    res = cpca_rank_features(X, Y, CpcaConfig(alpha=1.0, num_features=6))
    assert res.indices[0] == 0
    assert res.loadings[0] > 0.99
    # contrast ~ diag(9, 0, ...)
    assert abs(res.eigenvalue - 9.0) < 1.0


def test_alpha_zero_is_plain_pca():
    g = np.random.default_rng(2)
    X = g.standard_normal((200, 7)) @ np.diag([1, 5, 2, 0.5, 3, 1, 4])
    Y = g.standard_normal((50, 7))
    res = cpca_rank_features(X, Y, CpcaConfig(alpha=0.0, num_features=7))
    oracle = PCA(n_components=1, svd_solver="full").fit(X).components_[0]
    expected = sorted(range(7), key=lambda i: (-abs(oracle[i]), i))
    assert res.indices.tolist() == expected
    np.testing.assert_allclose(np.abs(res.loadings), np.abs(oracle), atol=1e-10)


def test_sign_convention_and_truncation():
    g = np.random.default_rng(3)
    res = cpca_rank_features(g.standard_normal((30, 8)), g.standard_normal((30, 8)), CpcaConfig(1.0, 3))
    assert len(res.indices) == 3 and len(res.loadings) == 8
    assert res.loadings[np.argmax(np.abs(res.loadings))] > 0


def test_nonpositive_eigenvalue_flagged():
    g = np.random.default_rng(4)
    X = 0.1 * g.standard_normal((100, 4))
    Y = 5.0 * g.standard_normal((100, 4))
    with pytest.warns(NonPositiveContrastWarning):
        res = cpca_rank_features(X, Y, CpcaConfig(1.0, 2))
    assert not res.eigenvalue_positive


def test_row_permutation_invariance():
    g = np.random.default_rng(5)
    X, Y = g.standard_normal((40, 6)), g.standard_normal((35, 6))
    a = cpca_rank_features(X, Y, CpcaConfig(1.0, 6))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonPositiveContrastWarning)
        b = cpca_rank_features(X[g.permutation(40)], Y[g.permutation(35)], CpcaConfig(1.0, 6))
    np.testing.assert_array_equal(a.indices, b.indices)


def test_errors():
    g = np.random.default_rng(6)
    X = g.standard_normal((10, 4))
    with pytest.raises(DimensionError):
        cpca_rank_features(X, g.standard_normal((10, 3)))
    with pytest.raises(DegenerateError):
        cpca_rank_features(X[:1], X)
    with pytest.raises(NumericError):
        CpcaConfig(alpha=-1.0)
    with pytest.raises(DimensionError):
        cpca_rank_features(X, g.standard_normal((10, 4)), CpcaConfig(1.0, 5))


def test_estimator():
    g = np.random.default_rng(7)
    X = g.standard_normal((50, 6))
    X[:, 2] *= 4
    Y = g.standard_normal((50, 6))
    est = CPCAFeatureRanker(alpha=1.0, n_features=2).fit(X, background=Y)
    assert est.feature_indices_[0] == 2
    assert est.transform(X).shape == (50, 2)
    with pytest.raises(ValueError):
        CPCAFeatureRanker().fit(X)
