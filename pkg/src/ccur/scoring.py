"""Leverage scores, contrastive score ratios and deterministic ranking.

Leverage scores are only unique when the ``k``-th and ``(k+1)``-th singular
values differ; with repeated singular values at the cut the top-``k``
subspace, and therefore the scores, depend on which SVD the solver returns.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from ._validation import check_count, check_positive
from .exceptions import DimensionError, NumericError
from .linalg import truncated_svd

DEFAULT_K = 7
DEFAULT_EPSILON = 1e-6


@dataclass(frozen=True)
class ScoreVector:
    """Per-column or per-row scores together with how they were produced."""

    scores: np.ndarray
    axis: Literal["columns", "rows"]
    k_used: int
    kind: Literal["leverage", "contrastive"]

    def __post_init__(self):
        s = np.asarray(self.scores, dtype=np.float64)
        if s.ndim != 1:
            raise DimensionError("scores must be 1-D")
        if not np.all(np.isfinite(s)) or np.any(s < 0):
            raise NumericError("scores must be finite and nonnegative")
        s = s.copy()
        s.flags.writeable = False
        object.__setattr__(self, "scores", s)

    def __len__(self):
        return self.scores.size

    def ranking(self):
        """Full ranking: every index, best first."""
        return rank_top(self, len(self))


@dataclass(frozen=True)
class ContrastiveConfig:
    k: int = DEFAULT_K
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        check_count(self.k, "k", 1, np.iinfo(np.int64).max)
        check_positive(self.epsilon, "epsilon")


def column_leverage(X, k: int) -> ScoreVector:
    """``scores[d] = sum_{i<k} V[d, i]**2`` from the top-``k`` right singular vectors."""
    svd = truncated_svd(X, k)
    scores = np.einsum("ij,ij->i", svd.right_vectors, svd.right_vectors)
    return ScoreVector(scores, "columns", svd.k, "leverage")


def row_leverage(X, k: int) -> ScoreVector:
    svd = truncated_svd(np.asarray(getattr(X, "values", X)).T, k)
    scores = np.einsum("ij,ij->i", svd.right_vectors, svd.right_vectors)
    return ScoreVector(scores, "rows", svd.k, "leverage")


def contrastive_scores(fg_leverage: ScoreVector, bg_leverage: ScoreVector,
                       epsilon: float = DEFAULT_EPSILON) -> ScoreVector:
    """Ratio ``fg / (bg + epsilon)``; ``epsilon`` only enters the denominator."""
    epsilon = check_positive(epsilon, "epsilon")
    if len(fg_leverage) != len(bg_leverage):
        raise DimensionError(
            f"foreground has {len(fg_leverage)} scores but background has {len(bg_leverage)}"
        )
    if fg_leverage.axis != bg_leverage.axis:
        raise DimensionError("foreground and background scores are on different axes")
    if fg_leverage.kind != "leverage" or bg_leverage.kind != "leverage":
        raise NumericError("contrastive scores are built from leverage scores")
    ratio = fg_leverage.scores / (bg_leverage.scores + epsilon)
    return ScoreVector(ratio, fg_leverage.axis, fg_leverage.k_used, "contrastive")


def rank_top(scores, count: int) -> np.ndarray:
    """Indices of the ``count`` largest scores, descending, ties by ascending index."""
    s = np.asarray(getattr(scores, "scores", scores), dtype=np.float64)
    count = check_count(count, "count", 1, s.size)
    order = np.argsort(-s, kind="stable")
    return order[:count]
