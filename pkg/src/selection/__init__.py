"""Tuning-parameter selection and thresholding."""

from .criteria import ebic, tau_threshold
from .tuning import assign_folds, select_alpha, select_lambda

__all__ = ["assign_folds", "ebic", "select_alpha", "select_lambda", "tau_threshold"]
