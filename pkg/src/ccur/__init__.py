"""Contrastive CUR: leverage-score feature and sample selection for case-control data.

Functional API::

    from ccur import ccur
    sel = ccur(X_fg, Y_bg, k=7, c=10, r=25)
    sel.col_indices, sel.row_indices

Estimator API::

    from ccur import ContrastiveCUR
    ContrastiveCUR(k=7, n_columns=10).fit(X_fg, background=Y_bg).transform(X_fg)
"""
__version__ = "0.1.0"

from .baselines import CPCAFeatureRanker, CpcaConfig, CpcaResult, cpca_rank_features
from .contrastive import CcurSelection, ContrastiveCUR, ccur, select_columns, select_rows
from .cur import CURDecomposition, CurFactors, cur_decompose, cur_sample
from .exceptions import CcurError, DegenerateError, DimensionError, InputError, NumericError
from .linalg import DataMatrix, TruncatedSvd, pca_project, pseudoinverse, truncated_svd
from .scoring import ContrastiveConfig, ScoreVector, column_leverage, contrastive_scores, rank_top, row_leverage

__all__ = [
    "CPCAFeatureRanker", "CURDecomposition", "CcurError", "CcurSelection", "ContrastiveCUR",
    "ContrastiveConfig", "CpcaConfig", "CpcaResult", "CurFactors", "DataMatrix", "DegenerateError",
    "DimensionError", "InputError", "NumericError", "ScoreVector", "TruncatedSvd", "ccur",
    "column_leverage", "contrastive_scores", "cpca_rank_features", "cur_decompose", "cur_sample",
    "pca_project", "pseudoinverse", "rank_top", "row_leverage", "select_columns", "select_rows",
    "truncated_svd",
]
