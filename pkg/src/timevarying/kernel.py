"""Gaussian kernel weights over normalized time."""

from typing import Sequence, Union

import numpy as np
from scipy.stats import norm

from core.exceptions import ValidationError
from models.timevarying import KernelWeights
from models.variables import Dataset


def normalize_timepoints(data: Dataset) -> np.ndarray:
    """Measurement times mapped onto [0, 1].

    Without recorded timepoints the rows are taken as equally spaced.
    """
    if data.timepoints is None:
        return np.linspace(0.0, 1.0, data.n)
    t = np.asarray(data.timepoints, dtype=float)
    return (t - t[0]) / (t[-1] - t[0])


def resolve_estpoints(estpoints: Union[int, Sequence[float]], data: Dataset) -> np.ndarray:
    """Estimation points on the normalized scale.

    An integer asks for that many equally spaced points on [0, 1]. A
    sequence whose values all lie in [0, 1] is taken as normalized;
    otherwise it is read on the raw time scale (the recorded timepoints,
    or row numbers 1..n) and normalized like the data.

    Raises:
        ValidationError: No points, or points outside the data's time range.
    """
    if isinstance(estpoints, (int, np.integer)):
        if estpoints < 1:
            raise ValidationError("at least one estimation point is required")
        return np.linspace(0.0, 1.0, int(estpoints))
    points = np.sort(np.asarray(estpoints, dtype=float))
    if points.size == 0:
        raise ValidationError("at least one estimation point is required")
    if np.any(points > 1.0):
        raw = np.asarray(data.timepoints, dtype=float) if data.timepoints is not None else np.arange(1.0, data.n + 1)
        points = (points - raw[0]) / (raw[-1] - raw[0])
    if np.any(points < 0.0) or np.any(points > 1.0):
        raise ValidationError(
            "estimation points must lie within the time range of the data",
            violations=[f"{value:.6g}" for value in points if not 0.0 <= value <= 1.0],
        )
    return points


def kernel_weights(
    timepoints: np.ndarray,
    t_e: float,
    sigma: float,
) -> KernelWeights:
    """Kernel weights of every row for estimation point ``t_e``.

    Densities are divided by the density at ``t_e`` itself, the maximum
    over the measured times together with ``t_e``, so a row measured at
    ``t_e`` gets weight 1 and points far from the data get small weights
    throughout.

    Args:
        timepoints: Normalized measurement times.
        t_e: Estimation point in [0, 1].
        sigma: Bandwidth.
    """
    if sigma <= 0:
        raise ValidationError(f"bandwidth must be positive, got {sigma}")
    density = norm.pdf(timepoints, loc=t_e, scale=sigma)
    weights = density / norm.pdf(t_e, loc=t_e, scale=sigma)
    return KernelWeights(weights=weights, t_e=float(t_e), sigma=float(sigma), local_n=float(weights.sum()))
