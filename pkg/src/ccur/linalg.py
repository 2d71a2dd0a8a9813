"""Dense matrix container, deterministic truncated SVD and pseudoinverse."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ._validation import as_2d_float, check_count
from .exceptions import DimensionError, InputError, NumericError


def _check_labels(labels, size, what):
    if labels is None:
        return None
    labels = [str(x) for x in labels]
    if len(labels) != size:
        raise InputError(f"{what} has {len(labels)} entries, expected {size}")
    if len(set(labels)) != len(labels):
        raise InputError(f"{what} must be unique")
    return labels


@dataclass(frozen=True)
class DataMatrix:
    """A finite real ``n x p`` matrix with optional row and column labels.

    ``values`` is stored as a read-only float64 copy.
    """

    values: np.ndarray
    row_labels: Optional[Sequence[str]] = None
    col_labels: Optional[Sequence[str]] = None

    def __post_init__(self):
        arr = as_2d_float(self.values, "matrix").copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "row_labels", _check_labels(self.row_labels, arr.shape[0], "row_labels"))
        object.__setattr__(self, "col_labels", _check_labels(self.col_labels, arr.shape[1], "col_labels"))

    @property
    def shape(self):
        return self.values.shape

    @property
    def T(self):
        return DataMatrix(self.values.T, self.col_labels, self.row_labels)

    def take_columns(self, indices):
        idx = np.asarray(indices, dtype=np.intp)
        labels = None if self.col_labels is None else [self.col_labels[i] for i in idx]
        return DataMatrix(self.values[:, idx], self.row_labels, labels)

    def take_rows(self, indices):
        idx = np.asarray(indices, dtype=np.intp)
        labels = None if self.row_labels is None else [self.row_labels[i] for i in idx]
        return DataMatrix(self.values[idx, :], labels, self.col_labels)

    def centered(self):
        """Copy with every column shifted to mean zero."""
        return DataMatrix(self.values - self.values.mean(axis=0), self.row_labels, self.col_labels)

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


@dataclass(frozen=True)
class TruncatedSvd:
    """Top-``k`` singular triplets: ``X ~ left_vectors @ diag(singular_values) @ right_vectors.T``."""

    k: int
    singular_values: np.ndarray
    left_vectors: np.ndarray = field(repr=False)
    right_vectors: np.ndarray = field(repr=False)

    def reconstruct(self):
        return (self.left_vectors * self.singular_values) @ self.right_vectors.T


_TIE_RTOL = 1e-12


def _fix_signs(U, V):
    # largest |entry| of each right vector made positive; magnitudes within
    # _TIE_RTOL of the max count as tied so round-off cannot pick the pivot
    mags = np.abs(V)
    pivots = np.argmax(mags >= mags.max(axis=0) * (1 - _TIE_RTOL), axis=0)
    signs = np.sign(V[pivots, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return U * signs, V * signs


def truncated_svd(X, k: int) -> TruncatedSvd:
    """Deterministic top-``k`` SVD of ``X``.

    Singular vectors are sign-normalized so that the entry of largest
    magnitude in every right singular vector is positive. ``k`` may exceed
    the numerical rank; trailing singular values are then ~0 and their
    vectors are orthonormal completions.
    """
    A = as_2d_float(X)
    n, p = A.shape
    k = check_count(k, "k", 1, min(n, p))
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    U, V = _fix_signs(U[:, :k], Vt[:k].T)
    return TruncatedSvd(k=k, singular_values=s[:k].copy(), left_vectors=U, right_vectors=V)


def default_tolerance(shape, sigma_max):
    return max(shape) * sigma_max * np.finfo(np.float64).eps


def pseudoinverse(A, tol: Optional[float] = None) -> np.ndarray:
    """Moore-Penrose inverse of ``A`` via a full SVD.

    Singular values ``<= tol`` are treated as zero. The default cutoff is
    ``max(n, p) * sigma_1 * eps``.
    """
    M = np.asarray(getattr(A, "values", A), dtype=np.float64)
    if M.ndim != 2:
        raise DimensionError(f"pseudoinverse needs a 2-D matrix, got ndim={M.ndim}")
    if M.size == 0:
        return np.zeros(M.shape[::-1])
    if not np.all(np.isfinite(M)):
        raise NumericError("pseudoinverse input contains non-finite entries")
    if tol is not None and not (np.isfinite(tol) and tol >= 0):
        raise NumericError(f"tol must be a nonnegative finite real, got {tol!r}")
    U, s, Vt = np.linalg.svd(M, full_matrices=False)
    if tol is None:
        tol = default_tolerance(M.shape, s[0] if s.size else 0.0)
    keep = s > tol
    inv = np.zeros_like(s)
    inv[keep] = 1.0 / s[keep]
    return (Vt.T * inv) @ U.T


def pca_project(X, n_components: int = 2) -> np.ndarray:
    """Scores of the column-centered ``X`` on its leading principal axes.

    Columns beyond the available rank are zero-filled so the result is
    always ``n x n_components``.
    """
    A = as_2d_float(X)
    A = A - A.mean(axis=0)
    k = min(n_components, *A.shape)
    svd = truncated_svd(A, k)
    out = np.zeros((A.shape[0], n_components))
    out[:, :k] = svd.left_vectors * svd.singular_values
    return out
