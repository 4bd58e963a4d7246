"""Predictions and nodewise errors for stationary and time-varying fits."""

from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import structlog

from core.config import Settings, get_settings
from core.exceptions import ValidationError
from design.matrix import evaluate_columns, usable_rows
from models.fits import MgmFit, MvarFit, NodeModel, TvFit
from models.glm import Family
from models.prediction import NodeError, PredictionResult, TvMethod
from models.variables import Dataset, VariableSpec
from solver.families import linear_predictor, mean_response
from timevarying.kernel import kernel_weights, normalize_timepoints

from .metrics import BUILTIN_METRICS, CATEGORICAL_METRICS, CONTINUOUS_METRICS, RAW_METRICS, MetricFn

logger = structlog.get_logger(__name__)

StationaryFitType = Union[MgmFit, MvarFit]


def check_schema(specs: Sequence[VariableSpec], data: Dataset) -> None:
    """Raise unless ``data`` has the variable layout the fit was estimated on."""
    if list(data.specs) != list(specs):
        raise ValidationError(
            "data schema does not match the fitted model",
            violations=[
                f"fit: {','.join(s.short for s in specs)}",
                f"data: {','.join(s.short for s in data.specs)}",
            ],
        )


def prediction_rows(fit: StationaryFitType, data: Dataset) -> np.ndarray:
    """Rows that can be predicted: all rows, or the usable lagged rows."""
    if isinstance(fit, MvarFit):
        return np.flatnonzero(usable_rows(data.n, fit.lags, data.consec))
    return np.arange(data.n)


def node_linear_predictor(model: NodeModel, prepared: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Linear predictor of a stored node regression on (standardized) data rows."""
    raw = evaluate_columns(prepared, model.colmeta, rows)
    x = (raw - model.centers) / model.scales
    return linear_predictor(x, model.coefficients, model.intercepts)


def predict_rows(
    fit: StationaryFitType,
    data: Dataset,
    rows: np.ndarray,
    settings: Optional[Settings] = None,
) -> Tuple[np.ndarray, List[Optional[np.ndarray]]]:
    """Per-node predictions of a stationary fit on the given rows.

    Returns:
        Tuple: ``len(rows) x p`` predictions on the data scale (conditional
        means, rates, or modal category codes) and per-node class
        probabilities (None for non-categorical nodes).
    """
    settings = settings or get_settings()
    prepared = fit.scaling.forward(data.values)
    values = np.zeros((len(rows), fit.p))
    probabilities: List[Optional[np.ndarray]] = []
    for s, model in enumerate(fit.node_models):
        eta = node_linear_predictor(model, prepared, rows)
        mean = mean_response(model.family, eta, settings.poisson_eta_clamp)
        if model.family == Family.MULTINOMIAL:
            probabilities.append(mean)
            values[:, s] = np.argmax(mean, axis=1)
        elif model.family == Family.GAUSSIAN:
            probabilities.append(None)
            values[:, s] = mean * fit.scaling.sds[s] + fit.scaling.means[s]
        else:
            probabilities.append(None)
            values[:, s] = mean
    return values, probabilities


def node_errors(
    specs: Sequence[VariableSpec],
    names: Sequence[str],
    truth: np.ndarray,
    predicted: np.ndarray,
    weights: Optional[np.ndarray] = None,
    custom: Optional[Dict[str, MetricFn]] = None,
) -> List[NodeError]:
    """Built-in metrics by variable type plus any custom metrics, per node."""
    errors = []
    if weights is not None and float(np.sum(weights)) <= 0:
        return [NodeError(node=j, name=names[j]) for j in range(len(specs))]
    for j, spec in enumerate(specs):
        names_j = CATEGORICAL_METRICS if spec.is_categorical else CONTINUOUS_METRICS
        metrics = {m: BUILTIN_METRICS[m](truth[:, j], predicted[:, j], weights) for m in names_j}
        raw = {m: RAW_METRICS[m](truth[:, j], predicted[:, j], weights) for m in names_j}
        for name, fn in (custom or {}).items():
            metrics[name] = raw[name] = fn(truth[:, j], predicted[:, j], weights)
        errors.append(NodeError(node=j, name=names[j], metrics=metrics, raw=raw))
    return errors


def _expand(rows: np.ndarray, n: int, values: np.ndarray, probabilities, specs) -> Tuple[np.ndarray, list]:
    full = np.full((n, values.shape[1]), np.nan)
    full[rows] = values
    full_probs = []
    for spec, probs in zip(specs, probabilities):
        if probs is None:
            full_probs.append(None)
            continue
        expanded = np.full((n, spec.levels), np.nan)
        expanded[rows] = probs
        full_probs.append(expanded)
    return full, full_probs


def predict_stationary(
    fit: StationaryFitType,
    data: Dataset,
    metrics: Optional[Dict[str, MetricFn]] = None,
    settings: Optional[Settings] = None,
) -> PredictionResult:
    """Predict every node of an MGM or mVAR fit and score the predictions.

    mVAR fits only predict rows whose lagged predictors are available
    under ``consec``; other rows are NaN.

    Args:
        fit: Stationary fit.
        data: Dataset with the fit's variable layout.
        metrics: Extra named metrics ``fn(truth, predicted, weights)``.
        settings: Settings override.

    Raises:
        ValidationError: Schema mismatch or no predictable row.
    """
    check_schema(fit.specs, data)
    rows = prediction_rows(fit, data)
    if rows.size == 0:
        raise ValidationError("no rows can be predicted")
    values, probabilities = predict_rows(fit, data, rows, settings)
    errors = node_errors(fit.specs, fit.names, data.values[rows], values, None, metrics)
    predicted, full_probs = _expand(rows, data.n, values, probabilities, fit.specs)
    logger.debug("Predicted", model=fit.model_type, rows=int(rows.size))
    return PredictionResult(rows=rows, predicted=predicted, probabilities=full_probs, errors=errors)


def predict_tv(
    fit: TvFit,
    data: Dataset,
    method: Union[TvMethod, str] = TvMethod.WEIGHTED,
    metrics: Optional[Dict[str, MetricFn]] = None,
    settings: Optional[Settings] = None,
) -> PredictionResult:
    """Predict with a time-varying fit.

    ``weighted`` averages the predictions of all estimation points with the
    kernel weights of each row (probabilities are averaged and the
    category is their argmax). ``closest`` uses the model of the nearest
    estimation point, the earlier one on ties. ``tv_errors`` scores each
    point's own predictions with that point's kernel weights.
    """
    method = TvMethod(method)
    check_schema(fit.specs, data)
    rows = prediction_rows(fit.fits[0], data)
    if rows.size == 0:
        raise ValidationError("no rows can be predicted")
    times = normalize_timepoints(data)[rows]
    per_point = [predict_rows(point_fit, data, rows, settings) for point_fit in fit.fits]
    kernel = np.array([kernel_weights(times, t_e, fit.bandwidth).weights for t_e in fit.estpoints])
    closest = np.argmin(np.abs(times[None, :] - fit.estpoints[:, None]), axis=0)

    specs = fit.specs
    values = np.zeros((len(rows), fit.p))
    probabilities: List[Optional[np.ndarray]] = []
    if method == TvMethod.CLOSEST:
        for s, spec in enumerate(specs):
            values[:, s] = np.array([per_point[e][0][i, s] for i, e in enumerate(closest)])
            if spec.is_categorical:
                probabilities.append(np.stack([per_point[e][1][s][i] for i, e in enumerate(closest)]))
            else:
                probabilities.append(None)
    else:
        total = kernel.sum(axis=0)
        # rows with no kernel mass anywhere fall back to the closest point
        share = np.where(total > 0, kernel / np.where(total > 0, total, 1.0), 0.0)
        share[closest[total <= 0], np.flatnonzero(total <= 0)] = 1.0
        for s, spec in enumerate(specs):
            if spec.is_categorical:
                probs = sum(share[e][:, None] * per_point[e][1][s] for e in range(len(per_point)))
                probabilities.append(probs)
                values[:, s] = np.argmax(probs, axis=1)
            else:
                probabilities.append(None)
                values[:, s] = sum(share[e] * per_point[e][0][:, s] for e in range(len(per_point)))

    truth = data.values[rows]
    errors = node_errors(specs, fit.names, truth, values, None, metrics)
    tv_errors = [
        node_errors(specs, fit.names, truth, per_point[e][0], kernel[e], metrics)
        for e in range(len(per_point))
    ]
    predicted, full_probs = _expand(rows, data.n, values, probabilities, specs)
    return PredictionResult(
        rows=rows, predicted=predicted, probabilities=full_probs, errors=errors, tv_errors=tv_errors
    )


def predict(
    fit: Union[MgmFit, MvarFit, TvFit],
    data: Dataset,
    method: Union[TvMethod, str] = TvMethod.WEIGHTED,
    metrics: Optional[Dict[str, MetricFn]] = None,
    settings: Optional[Settings] = None,
) -> PredictionResult:
    """Dispatch to the stationary or time-varying predictor."""
    if isinstance(fit, TvFit):
        return predict_tv(fit, data, method, metrics, settings)
    return predict_stationary(fit, data, metrics, settings)
