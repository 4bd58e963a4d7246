"""Mixed vector autoregressive model estimation.

Each variable at time t is regressed on every variable at each lag in the
lag set. Directed effects are read off the single regression of the
target, so no combination rule is involved.
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np

from core.base import ConfigurableEstimator
from core.config import Settings
from core.exceptions import ValidationError
from core.monitoring import MetricsCollector
from design.matrix import build_var_design, compute_scaling, usable_rows
from models.design import NodeDesign, VariableScaling
from models.factor import MvarCoefficients
from models.fits import MvarFit, NodeMeta, NodeModel
from models.options import MvarOptions
from models.variables import Dataset

from .mgm import check_binary_coding, node_warnings, observation_weights
from .nodewise import edge_sign, fit_node, var_blocks, zero_node


class MvarEstimator(ConfigurableEstimator[MvarOptions]):
    """Nodewise estimator of mixed VAR models."""

    model_label = "mvar"

    def __init__(
        self,
        lags: Sequence[int],
        options: Optional[MvarOptions] = None,
        name: Optional[str] = None,
        settings: Optional[Settings] = None,
        n_jobs: Optional[int] = None,
    ) -> None:
        self.lags = sorted(int(lag) for lag in lags)
        super().__init__(options or MvarOptions(), name, settings, n_jobs)

    def _validate_options(self) -> None:
        if not self.lags:
            raise ValidationError("at least one lag is required")
        if self.lags[0] < 1 or len(set(self.lags)) != len(self.lags):
            raise ValidationError("lags must be distinct positive integers", violations=[str(self.lags)])

    def prepare(self, data: Dataset) -> Tuple[VariableScaling, List[NodeDesign], np.ndarray]:
        """Scaling, per-node lagged designs and the row inclusion mask."""
        scaling = compute_scaling(data)

        def build(node: int) -> NodeDesign:
            design, response, _ = build_var_design(
                data, node, self.lags, self.options.overparameterize, scaling
            )
            return NodeDesign(design=design, response=response)

        designs = self._map_nodes(build, list(range(data.p)))
        return scaling, designs, usable_rows(data.n, self.lags, data.consec)

    def fit(self, data: Dataset, weights: Optional[Sequence[float]] = None) -> MvarFit:
        """Estimate the mVAR model.

        Args:
            data: Time-ordered dataset; ``consec`` restricts usable rows.
            weights: Optional observation weights, one per data row.

        Returns:
            MvarFit: Lagged adjacency, signs, coefficients and inclusion mask.
        """
        if self.options.binary_sign:
            check_binary_coding(data)
        w = observation_weights(weights, data.n)
        with MetricsCollector("fit_mvar", "estimation", model=self.model_label):
            scaling, designs, mask = self.prepare(data)
            fit = self.fit_prepared(data, scaling, designs, mask, w)
        self.logger.info(
            "mVAR estimated",
            p=data.p,
            lags=self.lags,
            n_usable=fit.n_usable,
            edges=int(np.count_nonzero(fit.wadj)),
        )
        return fit

    def fit_prepared(
        self,
        data: Dataset,
        scaling: VariableScaling,
        designs: Sequence[NodeDesign],
        mask: np.ndarray,
        weights: np.ndarray,
        label: Optional[str] = None,
        zero_reason: Optional[str] = None,
    ) -> MvarFit:
        """Fit all node regressions on prepared designs (weights per data row)."""
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
        wadj, signs, coefficients = self._assemble(data, node_models)
        return MvarFit(
            specs=data.specs,
            names=data.column_names,
            lags=self.lags,
            options=self.options,
            wadj=wadj,
            signs=signs,
            coefficients=coefficients,
            intercepts=[m.intercepts for m in node_models],
            inclusion_mask=mask,
            nodemeta=nodemeta,
            node_models=node_models,
            scaling=scaling,
            warnings=node_warnings(nodemeta),
        )

    def _assemble(
        self, data: Dataset, node_models: Sequence[NodeModel]
    ) -> Tuple[np.ndarray, np.ndarray, MvarCoefficients]:
        specs = data.specs
        p, n_lags = data.p, len(self.lags)
        max_level = max(spec.levels for spec in specs)
        wadj = np.zeros((p, p, n_lags))
        signs = np.full((p, p, n_lags), np.nan)
        coefarray = np.zeros((p, p, max_level, max_level, n_lags))
        for s, model in enumerate(node_models):
            for (r, lag), (array, native) in var_blocks(model, specs, self.lags).items():
                l = self.lags.index(lag)
                coefarray[s, r, : specs[s].levels, : specs[r].levels, l] = array
                if native > 0:
                    wadj[s, r, l] = native
                    signs[s, r, l] = edge_sign(array, specs[s], specs[r], self.options.binary_sign)
        return wadj, signs, MvarCoefficients(lags=self.lags, coefarray=coefarray)


def fit_mvar(
    data: Dataset,
    lags: Sequence[int],
    options: Optional[MvarOptions] = None,
    weights: Optional[Sequence[float]] = None,
    settings: Optional[Settings] = None,
    n_jobs: Optional[int] = None,
) -> MvarFit:
    """Estimate a mixed VAR model (see ``MvarEstimator.fit``)."""
    return MvarEstimator(lags, options, settings=settings, n_jobs=n_jobs).fit(data, weights)


def var_edge_tables(fit: MvarFit) -> List[List[Tuple[int, int, float, float]]]:
    """Directed edges per lag as (source, target, weight, sign) tuples.

    The source is the predictor variable and the target the response, so
    ``wadj[target, source, l]`` is the weight of each row.
    """
    tables = []
    for l in range(len(fit.lags)):
        targets, sources = np.nonzero(fit.wadj[:, :, l])
        tables.append([
            (int(j), int(i), float(fit.wadj[i, j, l]), float(fit.signs[i, j, l]))
            for i, j in sorted(zip(targets.tolist(), sources.tolist()), key=lambda e: (e[1], e[0]))
        ])
    return tables
