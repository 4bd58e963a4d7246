"""Edge-list and factor-graph export for external plotting tools."""

import json
from pathlib import Path
from typing import Optional, Union

import pandas as pd
import structlog

from core.exceptions import UsageError
from estimation.mgm import extract_factor_graph
from estimation.mvar import var_edge_tables
from models.common import sign_label
from models.fits import AnyFit, FactorGraph, MgmFit, MvarFit, TvFit

from .loader import write_csv

logger = structlog.get_logger(__name__)

PathLike = Union[str, Path]

EDGE_COLUMNS = ["source", "target", "lag", "weight", "sign"]


def _stationary(fit: AnyFit, estpoint_index: int) -> Union[MgmFit, MvarFit]:
    if not isinstance(fit, TvFit):
        return fit
    if not 0 <= estpoint_index < len(fit.fits):
        raise UsageError(
            f"estimation point index {estpoint_index} out of range for {len(fit.fits)} points"
        )
    return fit.fits[estpoint_index]


def edge_frame(fit: AnyFit, estpoint_index: int = 0) -> pd.DataFrame:
    """One row per nonzero adjacency entry.

    MGM edges are undirected and listed once (source before target) with a
    blank lag; mVAR edges are directed from predictor to response, one row
    per lag.
    """
    stationary = _stationary(fit, estpoint_index)
    names = stationary.names
    rows = []
    if isinstance(stationary, MgmFit):
        for i, j in stationary.edges():
            rows.append((names[i], names[j], None, float(stationary.wadj[i, j]), sign_label(stationary.signs[i, j])))
    else:
        for lag, table in zip(stationary.lags, var_edge_tables(stationary)):
            rows.extend((names[s], names[t], lag, w, sign_label(sign)) for s, t, w, sign in table)
    frame = pd.DataFrame(rows, columns=EDGE_COLUMNS)
    frame["lag"] = frame["lag"].astype("Int64")
    return frame


def export_edges(
    fit: AnyFit, path: PathLike, estpoint_index: int = 0, command: Optional[str] = None
) -> int:
    """Write the edge list CSV; returns the number of edges."""
    frame = edge_frame(fit, estpoint_index)
    write_csv(frame, path, command)
    logger.info("Edge list exported", path=str(path), edges=len(frame), model=fit.model_type)
    return len(frame)


def factor_graph(fit: AnyFit, estpoint_index: int = 0) -> FactorGraph:
    """Factor graph of an (estimation point of an) MGM fit.

    Raises:
        UsageError: The fit is an mVAR.
    """
    stationary = _stationary(fit, estpoint_index)
    if not isinstance(stationary, MgmFit):
        raise UsageError("factor graphs are only defined for MGM fits")
    return extract_factor_graph(stationary.rawfactors, stationary.p)


def export_factor_graph(
    fit: AnyFit, path: PathLike, estpoint_index: int = 0, command: Optional[str] = None
) -> FactorGraph:
    """Write the factor graph as JSON with typed nodes and the producing command."""
    graph = factor_graph(fit, estpoint_index)
    names = _stationary(fit, estpoint_index).names
    document = {
        "command": command,
        "nodes": [{"id": name, "type": "variable"} for name in names]
        + [
            {"id": f"factor{index}", "type": "factor", "members": [names[m] for m in f.members], "weight": f.weight}
            for index, f in enumerate(graph.factors)
        ],
        "edges": [
            {"factor": f"factor{e.factor}", "variable": names[e.variable], "weight": e.weight}
            for e in graph.edges
        ],
    }
    Path(path).write_text(json.dumps(document, indent=2) + "\n", encoding="utf-8")
    logger.info("Factor graph exported", path=str(path), factors=len(graph.factors))
    return graph
