"""Input checking shared by the estimator classes."""

from __future__ import annotations

import numpy as np

from .frequency import FrequencyTable, histogram
from .model import GlyphRecord


def check_counts(X) -> np.ndarray:
    """Coerce observations to a 1-D array of non-negative integers.

    Accepts a sequence, a column vector of shape (n, 1), or a
    :class:`FrequencyTable`, which is expanded back to observations.
    """
    if isinstance(X, FrequencyTable):
        return np.repeat(np.asarray(X.values), X.counts)
    arr = np.asarray(X)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise ValueError(f"expected 1-D count data, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("count data is empty")
    if arr.dtype.kind == "f":
        if not np.all(np.isfinite(arr)) or np.any(arr != np.round(arr)):
            raise ValueError("count data must be whole numbers")
        arr = arr.astype(np.int64)
    elif arr.dtype.kind not in "iub":
        raise ValueError(f"count data must be numeric, got dtype {arr.dtype}")
    if np.any(arr < 0):
        raise ValueError("count data must be non-negative")
    return arr.astype(np.int64)


def check_frequency_table(X) -> FrequencyTable:
    if isinstance(X, FrequencyTable):
        return X
    return histogram(check_counts(X).tolist())


def check_records(X) -> list:
    records = list(X)
    if not records:
        raise ValueError("no glyph records given")
    for r in records:
        if not isinstance(r, GlyphRecord):
            raise TypeError(f"expected GlyphRecord, got {type(r).__name__}")
    return records
