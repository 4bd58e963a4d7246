"""Nodewise regression shared by the MGM and mVAR estimators."""

from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import structlog

from core.config import Settings, get_settings
from core.exceptions import BaseAppException, EstimationError
from core.logging import log_context
from core.monitoring import track_node_regression
from models.design import DesignMatrix
from models.fits import NodeMeta, NodeModel
from models.glm import Family, GlmProblem
from models.selection import SelectionSpec, ThresholdMode
from models.variables import VariableSpec
from selection.criteria import tau, tau_threshold
from selection.tuning import select_alpha

logger = structlog.get_logger(__name__)


def node_family(spec: VariableSpec) -> Tuple[Family, int]:
    """GLM family and class count of a response variable."""
    return Family(spec.family), (spec.levels if spec.is_categorical else 1)


def fit_node(
    design: DesignMatrix,
    response: np.ndarray,
    spec: VariableSpec,
    weights: np.ndarray,
    selection: SelectionSpec,
    model_label: str,
    settings: Optional[Settings] = None,
) -> Tuple[NodeModel, NodeMeta]:
    """Select, fit and threshold one node regression.

    The effective sample size of EBIC and of the threshold is the sum of
    ``weights``.

    Raises:
        EstimationError: Any failure, with the node index attached.
    """
    settings = settings or get_settings()
    node = design.target
    family, n_classes = node_family(spec)
    try:
        problem = GlmProblem(
            family=family,
            n_classes=n_classes,
            design=design,
            response=response,
            obs_weights=weights,
            alpha=selection.alpha_seq[0],
        )
        with log_context(model=model_label, node=node):
            chosen = select_alpha(problem, selection, stream=node, settings=settings)
    except EstimationError as e:
        raise type(e)(e.message, node=node, details=e.details, cause=e) from e
    except (BaseAppException, ValueError) as e:
        raise EstimationError(str(e), node=node, cause=e) from e

    solution = chosen.selection.solution
    n_eff = problem.n_eff
    coefficients = tau_threshold(solution.coefficients, n_eff, design.q, selection.threshold_mode)
    applied_tau = 0.0
    if selection.threshold_mode == ThresholdMode.LW:
        applied_tau = tau(solution.s0, n_eff, design.q)
    track_node_regression(model_label, str(family))

    warnings = list(design.scale.warnings) if design.scale else []
    if not solution.converged:
        warnings.append("solver did not converge at the selected lambda")
    if solution.clamped:
        warnings.append("poisson linear predictor clamped")

    model = NodeModel(
        node=node,
        family=family,
        n_classes=n_classes,
        terms=design.terms,
        colmeta=design.colmeta,
        centers=design.scale.centers,
        scales=design.scale.scales,
        intercepts=solution.intercepts,
        coefficients=coefficients,
        residual_sd=solution.residual_sd,
    )
    meta = NodeMeta(
        node=node,
        family=family,
        lam=chosen.selection.lam,
        alpha=chosen.alpha,
        s0=int(np.count_nonzero(coefficients)),
        loglik=solution.loglik,
        deviance=-2.0 * solution.loglik,
        n_eff=n_eff,
        n_columns=design.q,
        tau=applied_tau,
        criterion=chosen.selection.criterion,
        converged=solution.converged,
        warnings=warnings,
    )
    logger.debug("Node fitted", node=node, lam=meta.lam, alpha=meta.alpha, s0=meta.s0)
    return model, meta


def zero_node(design: DesignMatrix, spec: VariableSpec, n_eff: float, reason: str) -> Tuple[NodeModel, NodeMeta]:
    """All-zero regression used where too little (local) data is available."""
    family, n_classes = node_family(spec)
    model = NodeModel(
        node=design.target,
        family=family,
        n_classes=n_classes,
        terms=design.terms,
        colmeta=design.colmeta,
        centers=design.scale.centers,
        scales=design.scale.scales,
        intercepts=np.zeros(n_classes),
        coefficients=np.zeros((design.q, n_classes)),
        residual_sd=1.0 if family == Family.GAUSSIAN else None,
    )
    meta = NodeMeta(
        node=design.target,
        family=family,
        lam=0.0,
        alpha=1.0,
        s0=0,
        loglik=0.0,
        deviance=0.0,
        n_eff=n_eff,
        n_columns=design.q,
        warnings=[reason],
    )
    return model, meta


def _target_index(member: int, node: int, category: Optional[int], klass: int) -> int:
    if member == node:
        return klass
    return 0 if category is None else category


def mgm_blocks(model: NodeModel, specs: Sequence[VariableSpec]) -> Dict[Tuple[int, ...], Tuple[np.ndarray, float]]:
    """Map each factor of a node regression to its parameter array.

    Arrays have one axis per factor member with the member's full level
    range; cells absent from the regression's encoding (reference
    categories) are zero. The second element is the mean absolute
    coefficient over the cells the regression actually estimates.
    """
    node = model.node
    blocks: Dict[Tuple[int, ...], Tuple[np.ndarray, float]] = {}
    by_group: Dict[int, list] = {}
    for c, meta in enumerate(model.colmeta):
        by_group.setdefault(meta.group, []).append(c)
    for group, term in enumerate(model.terms):
        members = tuple(sorted(term.sources + (node,)))
        array = np.zeros(tuple(specs[m].levels for m in members))
        columns = by_group.get(group, [])
        for c in columns:
            meta = model.colmeta[c]
            category_of = dict(zip(meta.sources, meta.categories))
            for klass in range(model.n_classes):
                index = tuple(_target_index(m, node, category_of.get(m), klass) for m in members)
                array[index] = model.coefficients[c, klass]
        native = float(np.mean(np.abs(model.coefficients[columns]))) if columns else 0.0
        blocks[members] = (array, native)
    return blocks


def var_blocks(
    model: NodeModel, specs: Sequence[VariableSpec], lags: Sequence[int]
) -> Dict[Tuple[int, int], Tuple[np.ndarray, float]]:
    """Map each (predictor, lag) of an mVAR regression to a target x predictor array."""
    node = model.node
    blocks: Dict[Tuple[int, int], Tuple[np.ndarray, float]] = {}
    by_group: Dict[int, list] = {}
    for c, meta in enumerate(model.colmeta):
        by_group.setdefault(meta.group, []).append(c)
    for group, term in enumerate(model.terms):
        predictor = term.sources[0]
        array = np.zeros((specs[node].levels, specs[predictor].levels))
        columns = by_group.get(group, [])
        for c in columns:
            category = model.colmeta[c].categories[0]
            for klass in range(model.n_classes):
                array[klass, 0 if category is None else category] = model.coefficients[c, klass]
        native = float(np.mean(np.abs(model.coefficients[columns]))) if columns else 0.0
        blocks[(predictor, term.lag)] = (array, native)
    return blocks


def edge_sign(parameters: np.ndarray, first: VariableSpec, second: VariableSpec, binary_sign: bool) -> float:
    """Sign of a pairwise parameter array, NaN where no sign is defined.

    Continuous pairs take the sign of their single parameter. With
    ``binary_sign`` binary variables are read through the contrast of
    category 1 against category 0.
    """
    first_cont = not first.is_categorical
    second_cont = not second.is_categorical
    if first_cont and second_cont:
        value = parameters[0, 0]
    elif binary_sign and first.is_binary and second.is_binary:
        value = parameters[1, 1] - parameters[1, 0] - parameters[0, 1] + parameters[0, 0]
    elif binary_sign and first.is_binary and second_cont:
        value = parameters[1, 0] - parameters[0, 0]
    elif binary_sign and first_cont and second.is_binary:
        value = parameters[0, 1] - parameters[0, 0]
    else:
        return float("nan")
    return float(np.sign(value)) if value != 0 else float("nan")
