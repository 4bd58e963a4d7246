"""Prediction and error metrics."""

from .metrics import metric_cc, metric_ncc, metric_r2, metric_rmse
from .predictor import predict, predict_stationary, predict_tv

__all__ = [
    "metric_cc",
    "metric_ncc",
    "metric_r2",
    "metric_rmse",
    "predict",
    "predict_stationary",
    "predict_tv",
]
