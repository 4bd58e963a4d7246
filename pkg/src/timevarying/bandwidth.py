"""Bandwidth selection by time-stratified cross-validation."""

from typing import Literal, Optional, Sequence, Union

import numpy as np
import structlog

from core.config import Settings
from core.exceptions import ValidationError
from core.monitoring import monitor_function
from design.matrix import usable_rows
from models.options import MgmOptions, MvarOptions
from models.timevarying import BandwidthSelection
from models.variables import Dataset
from prediction.predictor import predict_rows

from .estimator import TvMgmEstimator, TvMvarEstimator
from .kernel import normalize_timepoints

logger = structlog.get_logger(__name__)


def stratified_test_rows(usable: np.ndarray, folds: int, foldsize: int) -> list:
    """Equally spaced held-out rows per fold.

    Fold ``j`` (0-based) takes ``foldsize`` equally spaced positions from
    ``j .. n_u - foldsize + j - 1`` of the usable rows, so successive folds
    are shifted copies spread over the whole series.

    Raises:
        ValidationError: ``foldsize`` does not leave training rows.
    """
    n_u = len(usable)
    if foldsize >= n_u:
        raise ValidationError(f"bw_foldsize {foldsize} must be smaller than the {n_u} usable rows")
    tests = []
    for j in range(folds):
        positions = np.round(np.linspace(j, n_u - foldsize + j - 1, foldsize)).astype(np.int64)
        positions = np.unique(np.clip(positions, 0, n_u - 1))
        tests.append(usable[positions])
    return tests


def _score(data: Dataset, fit, rows: np.ndarray, values: np.ndarray) -> np.ndarray:
    truth = data.values[rows]
    errors = np.zeros(data.p)
    for j, spec in enumerate(data.specs):
        if spec.is_categorical:
            errors[j] = float(np.mean(truth[:, j] != values[:, j]))
        else:
            # gaussian errors on the standardized scale
            diff = (truth[:, j] - values[:, j]) / fit.scaling.sds[j]
            errors[j] = float(np.sqrt(np.mean(diff**2)))
    return errors


@monitor_function("bandwidth")
def bw_select(
    data: Dataset,
    model_type: Literal["mgm", "mvar"],
    bw_seq: Sequence[float],
    bw_folds: int = 10,
    bw_foldsize: int = 10,
    options: Optional[Union[MgmOptions, MvarOptions]] = None,
    lags: Optional[Sequence[int]] = None,
    settings: Optional[Settings] = None,
    n_jobs: Optional[int] = None,
) -> BandwidthSelection:
    """Choose the kernel bandwidth of a time-varying model.

    For every fold and bandwidth the model is fitted with the held-out rows
    weighted zero and estimation points at the held-out times. Each
    held-out row is predicted by the model at its own time and scored by
    RMSE (continuous) or 0/1 loss (categorical). The mean over variables,
    rows and folds is the error of the bandwidth; ties go to the larger
    bandwidth.

    Args:
        data: Dataset.
        model_type: ``mgm`` or ``mvar``.
        bw_seq: Candidate bandwidths.
        bw_folds: Number of folds.
        bw_foldsize: Held-out rows per fold.
        options: Estimator options of the model class.
        lags: Lag set (``mvar`` only).
        settings: Settings override.
        n_jobs: Worker threads.

    Returns:
        BandwidthSelection: Errors per bandwidth, fold and variable, their
        means, and the selected bandwidth.
    """
    bandwidths = np.asarray(list(bw_seq), dtype=float)
    if bandwidths.size == 0:
        raise ValidationError("bw_seq must not be empty")
    if np.any(bandwidths <= 0):
        raise ValidationError("bandwidths must be positive")
    if bw_folds < 1 or bw_foldsize < 1:
        raise ValidationError("bw_folds and bw_foldsize must be at least 1")
    if model_type == "mvar":
        if not lags:
            raise ValidationError("model_type mvar requires lags")
        usable = np.flatnonzero(usable_rows(data.n, lags, data.consec))
    elif model_type == "mgm":
        usable = np.arange(data.n)
    else:
        raise ValidationError(f"unknown model_type {model_type!r}")

    tests = stratified_test_rows(usable, bw_folds, bw_foldsize)
    times = normalize_timepoints(data)
    errors = np.zeros((bandwidths.size, bw_folds, data.p))
    for b, sigma in enumerate(bandwidths):
        for j, test in enumerate(tests):
            if model_type == "mgm":
                estimator = TvMgmEstimator(options or MgmOptions(), test.size, sigma, settings, n_jobs)
            else:
                estimator = TvMvarEstimator(lags, options or MvarOptions(), test.size, sigma, settings, n_jobs)
            weights = np.ones(data.n)
            weights[test] = 0.0
            tvfit = estimator.fit(data, weights=weights, estpoints=times[test])
            values = np.vstack([
                predict_rows(point_fit, data, np.array([row]), settings)[0]
                for point_fit, row in zip(tvfit.fits, test)
            ])
            errors[b, j] = _score(data, tvfit.fits[0], test, values)
        logger.debug("Bandwidth scored", bandwidth=float(sigma), error=float(errors[b].mean()))

    mean_errors = errors.mean(axis=(1, 2))
    best = np.flatnonzero(mean_errors == mean_errors.min())
    selected = float(bandwidths[best].max())
    logger.info("Bandwidth selected", bandwidth=selected, candidates=bandwidths.size)
    return BandwidthSelection(
        model_type=model_type,
        bandwidths=bandwidths,
        errors=errors,
        mean_errors=mean_errors,
        selected=selected,
        test_rows=tests,
    )
