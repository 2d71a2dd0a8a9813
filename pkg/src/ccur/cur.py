"""Leverage-score CUR decomposition, deterministic and sampled."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import as_2d_float, check_count
from .linalg import pseudoinverse
from .scoring import ScoreVector, column_leverage, rank_top, row_leverage


@dataclass(frozen=True)
class CurFactors:
    """``X ~ C @ U_mid @ R`` with ``C``/``R`` copied verbatim from ``X``."""

    col_indices: np.ndarray
    row_indices: np.ndarray
    C: np.ndarray = field(repr=False)
    U_mid: np.ndarray = field(repr=False)
    R: np.ndarray = field(repr=False)
    recon_error: float
    col_scores: ScoreVector = field(repr=False)
    row_scores: ScoreVector = field(repr=False)

    def reconstruct(self):
        return self.C @ self.U_mid @ self.R


def relative_error(X, approx):
    norm = np.linalg.norm(X)
    if norm == 0.0:
        return float(np.linalg.norm(approx))
    return float(np.linalg.norm(X - approx) / norm)


def _assemble(A, cols, rows, col_scores, row_scores):
    C = A[:, cols]
    R = A[rows, :]
    U_mid = pseudoinverse(C) @ A @ pseudoinverse(R)
    return CurFactors(
        col_indices=cols,
        row_indices=rows,
        C=C,
        U_mid=U_mid,
        R=R,
        recon_error=relative_error(A, C @ U_mid @ R),
        col_scores=col_scores,
        row_scores=row_scores,
    )


def _check_sizes(A, k, c, r):
    n, p = A.shape
    return (
        check_count(k, "k", 1, min(n, p)),
        check_count(c, "c", 1, p),
        check_count(r, "r", 1, n),
    )


def cur_decompose(X, k: int, c: int, r: int) -> CurFactors:
    """Keep the ``c`` columns and ``r`` rows of highest rank-``k`` leverage.

    The middle factor is ``pinv(C) @ X @ pinv(R)`` against the full ``X``.
    """
    A = as_2d_float(X)
    k, c, r = _check_sizes(A, k, c, r)
    col_scores = column_leverage(A, k)
    row_scores = row_leverage(A, k)
    return _assemble(A, rank_top(col_scores, c), rank_top(row_scores, r), col_scores, row_scores)


def sample_without_replacement(weights, count, rng):
    """Sequential weighted draws, renormalizing over what is left after each pick.

    Once the remaining weight is exhausted the rest are drawn uniformly.
    """
    w = np.array(weights, dtype=np.float64)
    chosen = []
    available = np.ones(w.size, dtype=bool)
    for _ in range(count):
        live = np.where(available, w, 0.0)
        total = live.sum()
        if total > 0:
            cdf = np.cumsum(live / total)
            pick = int(np.searchsorted(cdf, rng.random(), side="right"))
            pick = min(pick, w.size - 1)
            # floating-point edge: land on an exhausted slot, walk back to a live one
            while not (available[pick] and live[pick] > 0):
                pick -= 1
        else:
            pick = int(rng.choice(np.flatnonzero(available)))
        chosen.append(pick)
        available[pick] = False
    return np.asarray(chosen, dtype=np.intp)


def cur_sample(X, k: int, c: int, r: int, seed: int = 0) -> CurFactors:
    """Randomized CUR: indices drawn with probability ``leverage / k``.

    Deterministic for a fixed ``seed``. Indices are returned in draw order.
    """
    A = as_2d_float(X)
    k, c, r = _check_sizes(A, k, c, r)
    rng = np.random.default_rng(seed)
    col_scores = column_leverage(A, k)
    row_scores = row_leverage(A, k)
    cols = sample_without_replacement(col_scores.scores, c, rng)
    rows = sample_without_replacement(row_scores.scores, r, rng)
    return _assemble(A, cols, rows, col_scores, row_scores)


class CURDecomposition(TransformerMixin, BaseEstimator):
    """CUR decomposition as a scikit-learn transformer.

    ``transform`` returns the selected columns of its input, so the
    estimator slots into a pipeline as an interpretable feature selector.

    Parameters
    ----------
    k : int
        Number of singular vectors used for leverage scores.
    n_columns, n_rows : int
        How many columns (``c``) and rows (``r``) to keep.
    sampling : {"deterministic", "leverage"}
        Top-score selection or leverage-proportional sampling.
    random_state : int
        Seed used when ``sampling="leverage"``.
    """

    def __init__(self, k=7, n_columns=10, n_rows=10, sampling="deterministic", random_state=0):
        self.k = k
        self.n_columns = n_columns
        self.n_rows = n_rows
        self.sampling = sampling
        self.random_state = random_state

    def fit(self, X, y=None):
        A = as_2d_float(X)
        if self.sampling == "deterministic":
            factors = cur_decompose(A, self.k, self.n_columns, self.n_rows)
        elif self.sampling == "leverage":
            factors = cur_sample(A, self.k, self.n_columns, self.n_rows, seed=self.random_state)
        else:
            raise ValueError(f"unknown sampling mode {self.sampling!r}")
        self.factors_ = factors
        self.col_indices_ = factors.col_indices
        self.row_indices_ = factors.row_indices
        self.C_, self.U_, self.R_ = factors.C, factors.U_mid, factors.R
        self.reconstruction_error_ = factors.recon_error
        self.n_features_in_ = A.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "col_indices_")
        A = as_2d_float(X)
        if A.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {A.shape[1]} features, expected {self.n_features_in_}")
        return A[:, self.col_indices_]

    def reconstruct(self):
        """Low-rank approximation ``C @ U @ R`` of the training matrix."""
        check_is_fitted(self, "factors_")
        return self.factors_.reconstruct()
