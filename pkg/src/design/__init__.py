"""Nodewise regression designs."""

from .encoding import encode_categorical
from .matrix import (
    build_mgm_design,
    build_var_design,
    compute_scaling,
    evaluate_columns,
    prepare_values,
    standardize,
    usable_rows,
)

__all__ = [
    "build_mgm_design",
    "build_var_design",
    "compute_scaling",
    "encode_categorical",
    "evaluate_columns",
    "prepare_values",
    "standardize",
    "usable_rows",
]
