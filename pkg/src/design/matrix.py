"""Nodewise design construction.

Builds the regression designs of k-order MGMs (all predictor subsets up to
size k - 1, categorical blocks crossed) and of lag-set mVAR models (every
variable at every lag, rows filtered by the consecutiveness rule).
"""

from itertools import product
from typing import List, Optional, Sequence, Tuple

import numpy as np
import structlog

from core.exceptions import DesignError
from models.design import ColumnKind, ColumnMeta, DesignMatrix, ScaleRecord, Term, VariableScaling
from models.factor import all_subsets
from models.variables import Dataset, VariableKind, VariableSpec

from .encoding import indicator_pairs

logger = structlog.get_logger(__name__)

_CONSTANT_TOL = 1e-12


def compute_scaling(data: Dataset) -> VariableScaling:
    """Means and sample sds (ddof=1) of the gaussian columns."""
    means = np.zeros(data.p)
    sds = np.ones(data.p)
    for j, spec in enumerate(data.specs):
        if spec.kind == VariableKind.GAUSSIAN:
            column = data.values[:, j]
            means[j] = column.mean()
            sd = column.std(ddof=1)
            sds[j] = sd if sd > 0 else 1.0
    return VariableScaling(means=means, sds=sds)


def prepare_values(data: Dataset, scaling: VariableScaling) -> np.ndarray:
    """Data matrix with gaussian columns standardized by ``scaling``."""
    return scaling.forward(data.values)


def mgm_terms(p: int, target: int, k: int) -> List[Term]:
    """Predictor subsets of one MGM regression, by size then lexicographically."""
    others = [r for r in range(p) if r != target]
    return [Term(sources=subset) for subset in all_subsets(others, min(k - 1, len(others)))]


def var_terms(p: int, lags: Sequence[int]) -> List[Term]:
    """Lag blocks of one mVAR regression: every variable at every lag."""
    return [Term(sources=(r,), lag=lag) for lag in lags for r in range(p)]


def _column_kind(specs: Sequence[VariableSpec], sources: Tuple[int, ...]) -> ColumnKind:
    categorical = [specs[s].is_categorical for s in sources]
    if all(categorical):
        return ColumnKind.INDICATOR
    if any(categorical):
        return ColumnKind.MIXED
    if len(sources) == 1 and specs[sources[0]].kind == VariableKind.POISSON:
        return ColumnKind.COUNT
    return ColumnKind.CONTINUOUS


def _term_columns(
    prepared: np.ndarray,
    specs: Sequence[VariableSpec],
    term: Term,
    group: int,
    rows: np.ndarray,
    overparameterize: bool,
    check_empty: bool,
) -> Tuple[List[np.ndarray], List[ColumnMeta]]:
    source_rows = rows - term.lag if term.lag else rows
    pieces = []
    for s in term.sources:
        column = prepared[source_rows, s]
        if specs[s].is_categorical:
            try:
                pieces.append(indicator_pairs(column, specs[s].levels, overparameterize, check_empty))
            except DesignError as e:
                raise DesignError(f"variable {s}: {e.message}", cause=e) from e
        else:
            pieces.append([(None, column)])
    kind = _column_kind(specs, term.sources)
    columns, metas = [], []
    for combo in product(*pieces):
        values = np.ones(len(rows))
        for _, piece in combo:
            values = values * piece
        columns.append(values)
        metas.append(
            ColumnMeta(
                sources=term.sources,
                categories=tuple(category for category, _ in combo),
                lag=term.lag,
                kind=kind,
                group=group,
            )
        )
    return columns, metas


def evaluate_columns(prepared: np.ndarray, colmeta: Sequence[ColumnMeta], rows: np.ndarray) -> np.ndarray:
    """Rebuild unscaled design columns from their descriptions.

    Unlike the builders this never rejects unobserved categories, so it
    can be used on new data.
    """
    out = np.ones((len(rows), len(colmeta)))
    for c, meta in enumerate(colmeta):
        source_rows = rows - meta.lag if meta.lag else rows
        for s, category in zip(meta.sources, meta.categories):
            column = prepared[source_rows, s]
            out[:, c] *= column if category is None else (column == category)
    return out


def standardize(design: DesignMatrix) -> Tuple[DesignMatrix, ScaleRecord]:
    """Center and scale design columns by kind.

    Continuous columns are centered and scaled to unit sample sd, count
    columns are centered, indicator and mixed columns are left unscaled.
    Columns without variation are dropped and reported.

    Args:
        design: Unscaled design.

    Returns:
        Tuple[DesignMatrix, ScaleRecord]: The scaled design and what was applied.

    Raises:
        DesignError: Fewer than two rows, or no column survives.
    """
    if design.n_rows < 2:
        raise DesignError("standardization needs at least 2 rows")
    keep, centers, scales, dropped, warnings = [], [], [], [], []
    for c, meta in enumerate(design.colmeta):
        column = design.columns[:, c]
        spread = np.ptp(column)
        if spread <= _CONSTANT_TOL * max(1.0, float(np.max(np.abs(column)))):
            message = (
                f"dropped constant column {c} (sources {meta.sources}, categories {meta.categories})"
            )
            dropped.append(meta)
            warnings.append(message)
            logger.warning("Dropping constant design column", target=design.target, column=c)
            continue
        keep.append(c)
        if meta.kind == ColumnKind.CONTINUOUS:
            centers.append(column.mean())
            scales.append(column.std(ddof=1))
        elif meta.kind == ColumnKind.COUNT:
            centers.append(column.mean())
            scales.append(1.0)
        else:
            centers.append(0.0)
            scales.append(1.0)
    if not keep:
        raise DesignError(f"no usable predictor columns for node {design.target}")
    record = ScaleRecord(
        centers=np.array(centers), scales=np.array(scales), dropped=dropped, warnings=warnings
    )
    scaled = record.apply(design.columns[:, keep])
    result = design.model_copy(
        update={"columns": _readonly(scaled), "colmeta": [design.colmeta[c] for c in keep], "scale": record}
    )
    return result, record


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def _build(
    data: Dataset,
    target: int,
    terms: List[Term],
    rows: np.ndarray,
    overparameterize: bool,
    scaling: Optional[VariableScaling],
) -> Tuple[DesignMatrix, np.ndarray]:
    scaling = scaling or compute_scaling(data)
    prepared = prepare_values(data, scaling)
    columns, colmeta = [], []
    for group, term in enumerate(terms):
        cols, metas = _term_columns(prepared, data.specs, term, group, rows, overparameterize, True)
        columns.extend(cols)
        colmeta.extend(metas)
    raw = DesignMatrix(
        target=target,
        columns=np.column_stack(columns),
        colmeta=colmeta,
        terms=terms,
        rows=rows,
    )
    design, _ = standardize(raw)
    response = prepared[rows, target]
    if data.specs[target].is_categorical:
        response = response.astype(np.int64)
    return design, response


def build_mgm_design(
    data: Dataset,
    target: int,
    k: int,
    overparameterize: bool = False,
    scaling: Optional[VariableScaling] = None,
) -> Tuple[DesignMatrix, np.ndarray]:
    """Design and response of the regression of ``target`` in a k-order MGM.

    Args:
        data: Dataset.
        target: Response variable.
        k: Maximal factor order; orders beyond p are silently capped.
        overparameterize: One indicator per category instead of m - 1.
        scaling: Gaussian standardization; computed from ``data`` if omitted.

    Returns:
        Tuple[DesignMatrix, np.ndarray]: Scaled design and response
        (standardized if gaussian, counts if poisson, codes if categorical).
    """
    if k < 2:
        raise DesignError("k must be at least 2")
    if data.p < 2:
        raise DesignError("an MGM needs at least 2 variables")
    terms = mgm_terms(data.p, target, k)
    return _build(data, target, terms, np.arange(data.n), overparameterize, scaling)


def usable_rows(n: int, lags: Sequence[int], consec: Optional[np.ndarray] = None) -> np.ndarray:
    """Rows whose lagged predictors are all certified measurements.

    Without ``consec`` a row is usable when it has ``max(lags)``
    predecessors. With ``consec`` the counter must increase by exactly one
    at each of the ``max(lags)`` steps before the row.
    """
    max_lag = max(lags)
    index = np.arange(n)
    if consec is None:
        return index >= max_lag
    consec = np.asarray(consec, dtype=np.int64)
    run = np.zeros(n, dtype=np.int64)
    for t in range(1, n):
        run[t] = run[t - 1] + 1 if consec[t] - consec[t - 1] == 1 else 0
    return (run >= max_lag) & (index >= max_lag)


def build_var_design(
    data: Dataset,
    target: int,
    lags: Sequence[int],
    overparameterize: bool = False,
    scaling: Optional[VariableScaling] = None,
) -> Tuple[DesignMatrix, np.ndarray, np.ndarray]:
    """Lagged design, response and inclusion mask of one mVAR regression.

    Raises:
        DesignError: ``max(lags) >= n`` or no usable row.
    """
    lags = sorted(lags)
    if not lags or lags[0] < 1:
        raise DesignError("lags must be positive integers")
    if lags[-1] >= data.n:
        raise DesignError(f"max lag {lags[-1]} must be smaller than n = {data.n}")
    mask = usable_rows(data.n, lags, data.consec)
    rows = np.flatnonzero(mask)
    if rows.size == 0:
        raise DesignError("no consecutive sequences of required length")
    design, response = _build(data, target, var_terms(data.p, lags), rows, overparameterize, scaling)
    return design, response, mask
