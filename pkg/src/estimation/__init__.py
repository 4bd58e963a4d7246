"""Stationary MGM and mVAR estimators."""

from .mgm import MgmEstimator, aggregate_edges, combine_nodewise, extract_factor_graph, fit_mgm
from .mvar import MvarEstimator, fit_mvar, var_edge_tables

__all__ = [
    "MgmEstimator",
    "MvarEstimator",
    "aggregate_edges",
    "combine_nodewise",
    "extract_factor_graph",
    "fit_mgm",
    "fit_mvar",
    "var_edge_tables",
]
