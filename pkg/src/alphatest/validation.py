"""Input validation helpers.

Small checks shared by the estimators and the IO layer. They normalise
array-likes to float64 ndarrays and fail early with descriptive errors,
in the spirit of scikit-learn's ``check_array``.
"""

import numpy as np

from .exceptions import DataFormatError


def as_float_matrix(x, name):
    """Coerce to a 2-d float64 array, rejecting non-finite entries."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise DataFormatError(f"{name} must be 2-dimensional, got ndim={arr.ndim}")
    if arr.size == 0:
        raise DataFormatError(f"{name} is empty")
    if not np.isfinite(arr).all():
        t, i = np.argwhere(~np.isfinite(arr))[0]
        raise DataFormatError(f"{name} contains a non-finite entry at row {t}, column {i}")
    return arr


def as_float_vector(x, name):
    """Coerce to a 1-d float64 array, rejecting non-finite entries."""
    arr = np.asarray(x, dtype=float).reshape(-1)
    if arr.size == 0:
        raise DataFormatError(f"{name} is empty")
    if not np.isfinite(arr).all():
        i = int(np.argwhere(~np.isfinite(arr))[0])
        raise DataFormatError(f"{name} contains a non-finite entry at position {i}")
    return arr


def check_same_rows(a, b, name_a, name_b):
    if a.shape[0] != b.shape[0]:
        raise DataFormatError(
            f"{name_a} and {name_b} must have the same number of rows: "
            f"{a.shape[0]} != {b.shape[0]}"
        )


def check_probability(p, name):
    """Validate a finite probability in [0, 1] and return it as float."""
    p = float(p)
    if not np.isfinite(p):
        raise DataFormatError(f"{name} must be finite, got {p}")
    if not 0.0 <= p <= 1.0:
        raise DataFormatError(f"{name} must lie in [0, 1], got {p}")
    return p


def check_lag(lag, name="lag"):
    lag = int(lag)
    if lag < 0:
        raise DataFormatError(f"{name} must be non-negative, got {lag}")
    return lag


def default_labels(n, prefix):
    return [f"{prefix}{i + 1}" for i in range(n)]
