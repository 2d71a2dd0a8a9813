"""Contrastive CUR: joint column and row selection against a background group.

Columns are ranked by ``fg_leverage / (bg_leverage + epsilon)``. Rows are
then ranked by plain leverage of the foreground restricted to the chosen
columns; the background plays no part in the row stage.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.feature_selection import SelectorMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import as_2d_float, check_count, check_indices, check_positive
from .exceptions import CcurError, DimensionError
from .scoring import (
    DEFAULT_EPSILON,
    DEFAULT_K,
    ContrastiveConfig,
    ScoreVector,
    column_leverage,
    contrastive_scores,
    rank_top,
    row_leverage,
)

DEFAULT_C = 10


@dataclass(frozen=True)
class CcurSelection:
    col_indices: np.ndarray
    col_scores: ScoreVector = field(repr=False)
    row_indices: np.ndarray
    row_scores: ScoreVector = field(repr=False)
    config: ContrastiveConfig
    c: int
    r: int
    row_k: int
    """Singular vectors actually used in the row stage (``min(k, c, n)``)."""

    @property
    def row_k_capped(self):
        return self.row_k < self.config.k


def select_columns(X_fg, Y_bg, k: int = DEFAULT_K, c: int = DEFAULT_C,
                   epsilon: float = DEFAULT_EPSILON):
    """Top-``c`` columns by contrastive leverage ratio.

    Returns ``(col_indices, col_scores)``; ``col_scores`` covers all ``p``
    columns.
    """
    X = as_2d_float(X_fg, "foreground")
    Y = as_2d_float(Y_bg, "background")
    if X.shape[1] != Y.shape[1]:
        raise DimensionError(
            f"foreground has {X.shape[1]} columns but background has {Y.shape[1]}"
        )
    p = X.shape[1]
    k = check_count(k, "k", 1, min(X.shape[0], Y.shape[0], p))
    c = check_count(c, "c", 1, p)
    epsilon = check_positive(epsilon, "epsilon")
    scores = contrastive_scores(column_leverage(X, k), column_leverage(Y, k), epsilon)
    return rank_top(scores, c), scores


def select_rows(X_fg, col_indices, k: int, r: int):
    """Top-``r`` rows by leverage of ``X_fg[:, col_indices]``."""
    X = as_2d_float(X_fg, "foreground")
    cols = check_indices(col_indices, X.shape[1], "col_indices")
    restricted = X[:, cols]
    k = check_count(k, "k", 1, min(restricted.shape))
    r = check_count(r, "r", 1, X.shape[0])
    scores = row_leverage(restricted, k)
    return rank_top(scores, r), scores


def ccur(X_fg, Y_bg, k: int = DEFAULT_K, c: int = DEFAULT_C, r: Optional[int] = None,
         epsilon: float = DEFAULT_EPSILON) -> CcurSelection:
    """Run column selection then row selection; ``r`` defaults to ``c``.

    The restricted matrix has only ``c`` columns, so the row stage uses
    ``min(k, c, n)`` singular vectors.
    """
    config = ContrastiveConfig(k=k, epsilon=epsilon)
    if r is None:
        r = c
    try:
        cols, col_scores = select_columns(X_fg, Y_bg, k, c, epsilon)
    except CcurError as exc:
        raise exc.with_stage("column selection") from exc
    n = as_2d_float(X_fg, "foreground").shape[0]
    row_k = min(k, len(cols), n)
    try:
        rows, row_scores = select_rows(X_fg, cols, row_k, r)
    except CcurError as exc:
        raise exc.with_stage("row selection") from exc
    return CcurSelection(
        col_indices=cols,
        col_scores=col_scores,
        row_indices=rows,
        row_scores=row_scores,
        config=config,
        c=int(c),
        r=int(r),
        row_k=row_k,
    )


class ContrastiveCUR(SelectorMixin, BaseEstimator):
    """Contrastive CUR feature selector.

    ``fit`` takes the foreground as ``X`` and the control group through the
    ``background`` keyword, which a :class:`~sklearn.pipeline.Pipeline`
    can route with ``pipe.fit(X, step__background=Y)``. ``transform`` keeps
    the selected columns; the selected foreground rows are exposed as
    ``row_indices_``.
    """

    def __init__(self, k=DEFAULT_K, n_columns=DEFAULT_C, n_rows=None, epsilon=DEFAULT_EPSILON):
        self.k = k
        self.n_columns = n_columns
        self.n_rows = n_rows
        self.epsilon = epsilon

    def fit(self, X, y=None, background=None):
        if background is None:
            raise ValueError("ContrastiveCUR.fit requires a background matrix")
        X = as_2d_float(X, "foreground")
        sel = ccur(X, background, k=self.k, c=self.n_columns, r=self.n_rows, epsilon=self.epsilon)
        self.selection_ = sel
        self.col_indices_ = sel.col_indices
        self.row_indices_ = sel.row_indices
        self.column_scores_ = sel.col_scores.scores
        self.row_scores_ = sel.row_scores.scores
        self.n_features_in_ = X.shape[1]
        return self

    def _get_support_mask(self):
        check_is_fitted(self, "col_indices_")
        mask = np.zeros(self.n_features_in_, dtype=bool)
        mask[self.col_indices_] = True
        return mask
