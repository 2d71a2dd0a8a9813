"""Contrastive PCA feature ranking baseline."""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.feature_selection import SelectorMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import as_2d_float, check_count
from .exceptions import DegenerateError, DimensionError, NumericError


class NonPositiveContrastWarning(UserWarning):
    """The leading contrastive eigenvalue is <= 0: background variance dominates."""


@dataclass(frozen=True)
class CpcaConfig:
    alpha: float = 1.0
    num_features: int = 10

    def __post_init__(self):
        if not (np.isfinite(self.alpha) and self.alpha >= 0):
            raise NumericError(f"alpha must be a nonnegative finite real, got {self.alpha!r}")


@dataclass(frozen=True)
class CpcaResult:
    indices: np.ndarray
    loadings: np.ndarray
    eigenvalue: float

    @property
    def eigenvalue_positive(self):
        return self.eigenvalue > 0


def contrast_matrix(X_fg, Y_bg, alpha=1.0):
    X = as_2d_float(X_fg, "foreground")
    Y = as_2d_float(Y_bg, "background")
    if X.shape[1] != Y.shape[1]:
        raise DimensionError(
            f"foreground has {X.shape[1]} columns but background has {Y.shape[1]}"
        )
    for name, M in (("foreground", X), ("background", Y)):
        if M.shape[0] < 2:
            raise DegenerateError(f"{name} needs at least 2 rows for a covariance estimate")
    cov_fg = np.atleast_2d(np.cov(X, rowvar=False, ddof=1))
    cov_bg = np.atleast_2d(np.cov(Y, rowvar=False, ddof=1))
    return cov_fg - alpha * cov_bg, cov_fg, cov_bg


def cpca_rank_features(X_fg, Y_bg, config: Optional[CpcaConfig] = None) -> CpcaResult:
    """Rank features by |loading| on the leading eigenvector of ``Cov_fg - alpha Cov_bg``.

    Ties in |loading| go to the lower index. Loadings are sign-fixed so the
    entry of largest magnitude is positive. Warns with
    :class:`NonPositiveContrastWarning` when the leading eigenvalue is <= 0.
    """
    config = config or CpcaConfig()
    M, cov_fg, cov_bg = contrast_matrix(X_fg, Y_bg, config.alpha)
    p = M.shape[0]
    count = check_count(config.num_features, "num_features", 1, p)
    scale = max(np.abs(cov_fg).max(), config.alpha * np.abs(cov_bg).max())
    if np.abs(M).max() <= 8 * p * np.finfo(np.float64).eps * scale:
        raise DegenerateError("contrast matrix is zero; the groups cancel and no loading is defined")
    M = (M + M.T) / 2
    evals, evecs = np.linalg.eigh(M)
    top = evecs[:, -1]
    pivot = int(np.argmax(np.abs(top)))
    if top[pivot] < 0:
        top = -top
    if evals[-1] <= 0:
        warnings.warn(
            f"leading contrastive eigenvalue {evals[-1]:.3g} is not positive",
            NonPositiveContrastWarning,
            stacklevel=2,
        )
    order = np.argsort(-np.abs(top), kind="stable")
    return CpcaResult(indices=order[:count], loadings=top, eigenvalue=float(evals[-1]))


class CPCAFeatureRanker(SelectorMixin, BaseEstimator):
    """Keep the ``n_features`` columns with largest first-component CPCA loading."""

    def __init__(self, alpha=1.0, n_features=10):
        self.alpha = alpha
        self.n_features = n_features

    def fit(self, X, y=None, background=None):
        if background is None:
            raise ValueError("CPCAFeatureRanker.fit requires a background matrix")
        X = as_2d_float(X, "foreground")
        res = cpca_rank_features(X, background, CpcaConfig(self.alpha, self.n_features))
        self.result_ = res
        self.feature_indices_ = res.indices
        self.loadings_ = res.loadings
        self.n_features_in_ = X.shape[1]
        return self

    def _get_support_mask(self):
        check_is_fitted(self, "feature_indices_")
        mask = np.zeros(self.n_features_in_, dtype=bool)
        mask[self.feature_indices_] = True
        return mask
