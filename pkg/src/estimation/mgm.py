"""k-order mixed graphical model estimation.

Every variable is regressed on all predictor subsets of size below k.
Each factor is then estimated once per member regression; these
estimates are merged with the AND or OR rule into one parameter array and
one nonnegative weight per factor.
"""

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.base import ConfigurableEstimator
from core.exceptions import EstimationError, ValidationError
from core.monitoring import MetricsCollector
from design.matrix import build_mgm_design, compute_scaling
from models.design import NodeDesign, VariableScaling
from models.fits import FactorEdge, FactorGraph, FactorNode, MgmFit, NodeMeta, NodeModel, RawFactor
from models.options import CombineRule, MgmOptions
from models.variables import Dataset, VariableSpec

from .nodewise import edge_sign, fit_node, mgm_blocks, zero_node


def observation_weights(weights: Optional[Sequence[float]], n: int) -> np.ndarray:
    """Validated per-row weights, all ones when none are given."""
    if weights is None:
        return np.ones(n)
    w = np.asarray(weights, dtype=float)
    if w.shape != (n,):
        raise ValidationError(f"expected {n} observation weights, got {w.size}")
    if np.any(~np.isfinite(w)) or np.any(w < 0):
        raise ValidationError("observation weights must be finite and nonnegative")
    return w


def check_binary_coding(data: Dataset) -> None:
    """Require {0, 1} coding of binary variables for sign extraction.

    Raises:
        ValidationError: A binary variable is coded otherwise.
    """
    violations = [
        f"{data.column_names[j]}: labels {data.labels(j)}"
        for j, spec in enumerate(data.specs)
        if spec.is_binary and data.labels(j) != ["0", "1"]
    ]
    if violations:
        raise ValidationError("binary variables must be coded {0, 1} to report signs", violations=violations)


def combine_nodewise(estimates: Sequence[np.ndarray], rule: CombineRule) -> np.ndarray:
    """Merge the per-regression estimates of one factor.

    The combined array is the mean of the estimates. Under the AND rule it
    is zero unless every estimate has a nonzero cell.

    Raises:
        EstimationError: Estimates of different shapes.
    """
    if not estimates:
        raise EstimationError("no estimates to combine")
    if len({np.shape(e) for e in estimates}) > 1:
        raise EstimationError("misaligned parameter shapes across regressions")
    stacked = np.stack([np.asarray(e, dtype=float) for e in estimates])
    if rule == CombineRule.AND and not all(np.any(e != 0) for e in stacked):
        return np.zeros(stacked.shape[1:])
    return stacked.mean(axis=0)


def factor_weight(parameters: np.ndarray) -> float:
    """Mean absolute parameter of a factor."""
    return float(np.mean(np.abs(parameters)))


def _aligned(specs: Sequence[VariableSpec], members: Tuple[int, ...], overparameterize: bool) -> bool:
    return overparameterize or not any(specs[m].is_categorical for m in members)


def combine_factors(
    node_models: Sequence[NodeModel], specs: Sequence[VariableSpec], options: MgmOptions
) -> List[RawFactor]:
    """Recover all factors with a nonzero combined estimate.

    With reference coding, the regressions of a factor's members estimate
    different cells, so the weight is the mean over regressions of each
    regression's own mean absolute coefficient. When all regressions
    estimate the same cells the weight is taken from the combined array.
    """
    blocks = [mgm_blocks(model, specs) for model in node_models]
    factors = sorted({f for b in blocks for f in b}, key=lambda f: (len(f), f))
    recovered = []
    for members in factors:
        shape = tuple(specs[m].levels for m in members)
        estimates = [blocks[m].get(members, (np.zeros(shape), 0.0)) for m in members]
        combined = combine_nodewise([e[0] for e in estimates], options.rule)
        if not np.any(combined):
            continue
        if _aligned(specs, members, options.overparameterize):
            weight = factor_weight(combined)
        else:
            weight = float(np.mean([e[1] for e in estimates]))
        recovered.append(RawFactor(members=members, parameters=combined, weight=weight))
    return recovered


def aggregate_edges(
    rawfactors: Sequence[RawFactor], specs: Sequence[VariableSpec], binary_sign: bool = False
) -> Tuple[np.ndarray, np.ndarray]:
    """Weighted adjacency and sign matrices from the pairwise factors.

    Returns:
        Tuple[np.ndarray, np.ndarray]: Symmetric ``wadj`` and ``signs``
        (NaN where no sign is defined).
    """
    p = len(specs)
    wadj = np.zeros((p, p))
    signs = np.full((p, p), np.nan)
    for factor in rawfactors:
        if factor.order != 2 or factor.weight <= 0:
            continue
        a, b = factor.members
        wadj[a, b] = wadj[b, a] = factor.weight
        signs[a, b] = signs[b, a] = edge_sign(factor.parameters, specs[a], specs[b], binary_sign)
    return wadj, signs


def extract_factor_graph(rawfactors: Sequence[RawFactor], p: int) -> FactorGraph:
    """Bipartite graph with one factor node per recovered factor."""
    factors, edges = [], []
    for factor in rawfactors:
        if factor.weight <= 0:
            continue
        index = len(factors)
        factors.append(FactorNode(members=factor.members, weight=factor.weight))
        edges.extend(FactorEdge(factor=index, variable=m, weight=factor.weight) for m in factor.members)
    return FactorGraph(n_variables=p, factors=factors, edges=edges)


def node_warnings(nodemeta: Sequence[NodeMeta]) -> List[str]:
    return [f"node {meta.node}: {w}" for meta in nodemeta for w in meta.warnings]


class MgmEstimator(ConfigurableEstimator[MgmOptions]):
    """Nodewise estimator of k-order mixed graphical models."""

    model_label = "mgm"

    def prepare(self, data: Dataset) -> Tuple[VariableScaling, List[NodeDesign]]:
        """Scaling and per-node designs; they do not depend on weights."""
        scaling = compute_scaling(data)

        def build(node: int) -> NodeDesign:
            design, response = build_mgm_design(
                data, node, self.options.k, self.options.overparameterize, scaling
            )
            return NodeDesign(design=design, response=response)

        return scaling, self._map_nodes(build, list(range(data.p)))

    def fit(self, data: Dataset, weights: Optional[Sequence[float]] = None) -> MgmFit:
        """Estimate the MGM.

        Args:
            data: Dataset.
            weights: Optional observation weights, one per row.

        Returns:
            MgmFit: Adjacency, signs, factors and per-node regressions.

        Raises:
            ValidationError: Bad weights or binary coding.
            DesignError: A regression design cannot be built.
            EstimationError: A node regression failed.
        """
        if self.options.binary_sign:
            check_binary_coding(data)
        w = observation_weights(weights, data.n)
        with MetricsCollector("fit_mgm", "estimation", model=self.model_label):
            scaling, designs = self.prepare(data)
            fit = self.fit_prepared(data, scaling, designs, w)
        self.logger.info("MGM estimated", p=data.p, n=data.n, k=self.options.k, edges=len(fit.edges()))
        return fit

    def fit_prepared(
        self,
        data: Dataset,
        scaling: VariableScaling,
        designs: Sequence[NodeDesign],
        weights: np.ndarray,
        label: Optional[str] = None,
        zero_reason: Optional[str] = None,
    ) -> MgmFit:
        """Fit all node regressions on prepared designs.

        Args:
            data: Dataset the designs were built from.
            scaling: Gaussian standardization of ``data``.
            designs: One design per node.
            weights: Weight per data row.
            label: Model label for metrics.
            zero_reason: When set, every regression is the all-zero fit and
                the reason is recorded as a warning.
        """
        label = label or self.model_label
        selection = self.options.selection

        def node(s: int) -> Tuple[NodeModel, NodeMeta]:
            nd = designs[s]
            row_weights = weights[nd.design.rows]
            if zero_reason is not None:
                return zero_node(nd.design, data.specs[s], float(row_weights.sum()), zero_reason)
            return fit_node(nd.design, nd.response, data.specs[s], row_weights, selection, label, self.settings)

        results = self._map_nodes(node, list(range(data.p)))
        node_models = [r[0] for r in results]
        nodemeta = [r[1] for r in results]
        rawfactors = combine_factors(node_models, data.specs, self.options)
        wadj, signs = aggregate_edges(rawfactors, data.specs, self.options.binary_sign)
        return MgmFit(
            specs=data.specs,
            names=data.column_names,
            options=self.options,
            wadj=wadj,
            signs=signs,
            rawfactors=rawfactors,
            intercepts=[m.intercepts for m in node_models],
            nodemeta=nodemeta,
            node_models=node_models,
            scaling=scaling,
            warnings=node_warnings(nodemeta),
        )


def fit_mgm(
    data: Dataset,
    options: Optional[MgmOptions] = None,
    weights: Optional[Sequence[float]] = None,
    settings=None,
    n_jobs: Optional[int] = None,
) -> MgmFit:
    """Estimate a k-order MGM (see ``MgmEstimator.fit``)."""
    return MgmEstimator(options or MgmOptions(), settings=settings, n_jobs=n_jobs).fit(data, weights)


def factor_table(fit: MgmFit) -> Dict[Tuple[int, ...], float]:
    """Factor members to weight."""
    return {f.members: f.weight for f in fit.rawfactors}
