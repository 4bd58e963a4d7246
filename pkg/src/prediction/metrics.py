"""Nodewise prediction error metrics.

Every metric takes optional observation weights; with none given all rows
count equally.
"""

from typing import Callable, Dict, Optional

import numpy as np

MetricFn = Callable[[np.ndarray, np.ndarray, Optional[np.ndarray]], Optional[float]]

CONTINUOUS_METRICS = ("rmse", "r2")
CATEGORICAL_METRICS = ("cc", "ncc")


def _weights(truth: np.ndarray, weights: Optional[np.ndarray]) -> np.ndarray:
    if weights is None:
        return np.ones(len(truth))
    return np.asarray(weights, dtype=float)


def metric_rmse(truth: np.ndarray, predicted: np.ndarray, weights: Optional[np.ndarray] = None) -> float:
    """Root mean squared error."""
    w = _weights(truth, weights)
    return float(np.sqrt(np.average((truth - predicted) ** 2, weights=w)))


def r2_raw(truth: np.ndarray, predicted: np.ndarray, weights: Optional[np.ndarray] = None) -> Optional[float]:
    """Unclamped 1 - RSS/TSS, None when the truth has no variance."""
    w = _weights(truth, weights)
    center = np.average(truth, weights=w)
    tss = float(w @ (truth - center) ** 2)
    if tss <= 0:
        return None
    return 1.0 - float(w @ (truth - predicted) ** 2) / tss


def metric_r2(truth: np.ndarray, predicted: np.ndarray, weights: Optional[np.ndarray] = None) -> Optional[float]:
    """Proportion of explained variance, clamped at 0."""
    value = r2_raw(truth, predicted, weights)
    return None if value is None else max(value, 0.0)


def metric_cc(truth: np.ndarray, predicted: np.ndarray, weights: Optional[np.ndarray] = None) -> float:
    """Proportion of correct classification."""
    w = _weights(truth, weights)
    return float(np.average(truth == predicted, weights=w))


def max_marginal(truth: np.ndarray, weights: Optional[np.ndarray] = None) -> float:
    """Relative frequency of the most frequent category in ``truth``."""
    w = _weights(truth, weights)
    _, inverse = np.unique(truth, return_inverse=True)
    return float(np.bincount(inverse, weights=w).max() / w.sum())


def ncc_raw(truth: np.ndarray, predicted: np.ndarray, weights: Optional[np.ndarray] = None) -> Optional[float]:
    """Unclamped (CC - max marginal) / (1 - max marginal)."""
    baseline = max_marginal(truth, weights)
    if baseline >= 1.0:
        return None
    return (metric_cc(truth, predicted, weights) - baseline) / (1.0 - baseline)


def metric_ncc(truth: np.ndarray, predicted: np.ndarray, weights: Optional[np.ndarray] = None) -> Optional[float]:
    """Accuracy beyond always predicting the modal category, clamped at 0."""
    value = ncc_raw(truth, predicted, weights)
    return None if value is None else max(value, 0.0)


BUILTIN_METRICS: Dict[str, MetricFn] = {
    "rmse": metric_rmse,
    "r2": metric_r2,
    "cc": metric_cc,
    "ncc": metric_ncc,
}

RAW_METRICS: Dict[str, MetricFn] = {
    "rmse": metric_rmse,
    "r2": r2_raw,
    "cc": metric_cc,
    "ncc": ncc_raw,
}
