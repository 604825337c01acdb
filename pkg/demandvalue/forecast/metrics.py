"""
Similarity metrics between ground-truth and predicted demand.

All metrics return 1.0 for a perfect prediction. Degenerate inputs (zero
norms, zero denominators) score as uninformative instead of raising, except
where a metric is undefined (empty input, all-zero RDTW reference).
"""

from collections.abc import Callable
from functools import partial

import numpy as np
from numpy.typing import ArrayLike

from demandvalue.core.series import FloatArray
from demandvalue.errors import ConfigError, InvalidInputError

Metric = Callable[[ArrayLike, ArrayLike], float]


def _as_pair(truth: ArrayLike, pred: ArrayLike) -> tuple[FloatArray, FloatArray]:
    a = np.asarray(truth, dtype=np.float64).ravel()
    b = np.asarray(pred, dtype=np.float64).ravel()
    if len(a) != len(b):
        raise InvalidInputError(
            "Compared vectors differ in length", {"truth": len(a), "pred": len(b)}
        )
    if len(a) == 0:
        raise InvalidInputError("Compared vectors are empty")
    return a, b


def mean_normalize(values: FloatArray) -> FloatArray:
    """Divide by the mean; an all-zero vector stays all zeros."""
    mean = values.mean()
    return values / mean if mean != 0 else np.zeros_like(values)


def max_normalize(values: FloatArray) -> FloatArray:
    peak = np.abs(values).max()
    return values / peak if peak != 0 else np.zeros_like(values)


def l2_normalize(values: FloatArray) -> FloatArray:
    norm = np.linalg.norm(values)
    return values / norm if norm != 0 else np.zeros_like(values)


NORMALIZERS: dict[str, Callable[[FloatArray], FloatArray]] = {
    "mean": mean_normalize,
    "max": max_normalize,
    "l2": l2_normalize,
}


def _normalizer(name: str) -> Callable[[FloatArray], FloatArray]:
    try:
        return NORMALIZERS[name]
    except KeyError:
        raise ConfigError(
            f"Unknown normalization: {name}", {"available": sorted(NORMALIZERS)}
        ) from None


def cosine_similarity(truth: ArrayLike, pred: ArrayLike) -> float:
    """Cosine of the angle between non-negative vectors, in [0, 1]."""
    a, b = _as_pair(truth, pred)
    if np.any(a < 0) or np.any(b < 0):
        raise InvalidInputError("Cosine similarity expects non-negative demand")
    norm_a = np.linalg.norm(a)
    norm_b = np.linalg.norm(b)
    if norm_a == 0 or norm_b == 0:
        return 0.0
    return float(np.clip(np.dot(a, b) / (norm_a * norm_b), 0.0, 1.0))


def numerical_similarity(
    truth: ArrayLike, pred: ArrayLike, normalization: str = "mean"
) -> float:
    """One minus the mean relative difference of the normalized vectors.

    Terms whose denominator is zero contribute 0.
    """
    a, b = _as_pair(truth, pred)
    normalize = _normalizer(normalization)
    a, b = normalize(a), normalize(b)
    numerator = np.abs(a - b)
    denominator = a + b
    terms = np.divide(
        numerator,
        denominator,
        out=np.zeros_like(numerator),
        where=denominator != 0,
    )
    return float(1.0 - terms.mean())


def dtw_distance(a: ArrayLike, b: ArrayLike) -> float:
    """Dynamic time warping with cost ``|a_i - b_j|`` and a full window.

    The warping path starts at (0, 0) and ends at (len(a)-1, len(b)-1).
    """
    s = np.asarray(a, dtype=np.float64).ravel()
    t = np.asarray(b, dtype=np.float64).ravel()
    if len(s) == 0 or len(t) == 0:
        raise InvalidInputError("DTW needs non-empty sequences")

    m = len(t)
    row_t = t.tolist()
    infinity = float("inf")

    previous = [0.0] + [infinity] * m
    for s_i in s.tolist():
        current = [infinity] * (m + 1)
        for j in range(1, m + 1):
            cost = abs(s_i - row_t[j - 1])
            current[j] = cost + min(previous[j - 1], previous[j], current[j - 1])
        previous = current

    return previous[m]


def relative_dtw(
    truth: ArrayLike, pred: ArrayLike, normalization: str = "mean"
) -> float:
    """``1 - DTW(truth, pred) / DTW(truth, 0)`` on normalized vectors.

    Can be negative when the prediction warps worse than predicting nothing.
    """
    a, b = _as_pair(truth, pred)
    if not np.any(a != 0):
        raise InvalidInputError("Relative DTW is undefined for an all-zero truth")
    normalize = _normalizer(normalization)
    a, b = normalize(a), normalize(b)

    # Against a constant zero sequence the diagonal path is optimal
    reference = float(np.abs(a).sum())
    return 1.0 - dtw_distance(a, b) / reference


METRICS: dict[str, Metric] = {
    "cossim": cosine_similarity,
    "numsim": numerical_similarity,
    "rdtw": relative_dtw,
}


def get_metric(name: str, normalization: str = "mean") -> Metric:
    """Look up a similarity metric by name.

    Args:
        name: One of ``cossim``, ``numsim``, ``rdtw``
        normalization: Normalizer for the shape metrics (ignored by ``cossim``)
    """
    try:
        metric = METRICS[name]
    except KeyError:
        raise ConfigError(
            f"Unknown metric: {name}", {"available": sorted(METRICS)}
        ) from None
    _normalizer(normalization)
    if metric is cosine_similarity or normalization == "mean":
        return metric
    return partial(metric, normalization=normalization)
