"""Input validation helpers shared by the functional and estimator APIs."""
from __future__ import annotations

import numbers

import numpy as np

from .exceptions import DimensionError, NumericError


def as_2d_float(X, name="X"):
    """Coerce ``X`` (array-like or DataMatrix) to a finite 2-D float64 array."""
    values = getattr(X, "values", X)
    try:
        arr = np.asarray(values, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise NumericError(f"{name} is not numeric: {exc}") from None
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-dimensional, got ndim={arr.ndim}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"{name} must have at least one row and column, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        bad = np.argwhere(~np.isfinite(arr))[0]
        raise NumericError(
            f"{name} contains a non-finite entry at row {bad[0]}, column {bad[1]}"
        )
    return arr


def check_count(value, name, low, high):
    """Validate an integer size parameter lies in ``[low, high]``."""
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise DimensionError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if not low <= value <= high:
        raise DimensionError(f"{name}={value} out of range [{low}, {high}]")
    return value


def check_positive(value, name):
    if not (isinstance(value, numbers.Real) and np.isfinite(value) and value > 0):
        raise NumericError(f"{name} must be a positive finite real, got {value!r}")
    return float(value)


def check_indices(indices, size, name):
    """Validate a non-empty list of unique in-range integer positions."""
    idx = np.asarray(indices)
    if idx.ndim != 1 or idx.size == 0:
        raise DimensionError(f"{name} must be a non-empty 1-D index list")
    if not np.issubdtype(idx.dtype, np.integer):
        raise DimensionError(f"{name} must contain integers")
    if idx.min() < 0 or idx.max() >= size:
        raise DimensionError(f"{name} has entries outside [0, {size - 1}]")
    if np.unique(idx).size != idx.size:
        raise DimensionError(f"{name} contains duplicates")
    return idx.astype(np.intp)
