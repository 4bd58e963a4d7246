"""Fitted model types.

``MgmFit`` and ``MvarFit`` hold stationary estimates, ``TvFit`` one of
them per estimation point. Every fit keeps its per-node regressions and
the gaussian standardization so predictions can be recomputed on new
data.
"""

from typing import Annotated, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import Field, model_validator

from .common import BaseModel, BoolArray, FloatArray, SignArray
from .design import ColumnMeta, Term, VariableScaling
from .factor import MvarCoefficients
from .glm import Family
from .options import MgmOptions, MvarOptions
from .variables import VariableSpec


class NodeModel(BaseModel):
    """One fitted node regression, sufficient to predict the node."""

    node: int = Field(..., ge=0, description="Response variable")
    family: Family = Field(..., description="Response family")
    n_classes: int = Field(default=1, ge=1, description="Categories of the response")
    terms: List[Term] = Field(..., description="Predictor subsets by group id")
    colmeta: List[ColumnMeta] = Field(..., description="Kept design columns")
    centers: FloatArray = Field(..., description="Column centers")
    scales: FloatArray = Field(..., description="Column scales")
    intercepts: FloatArray = Field(..., description="K intercepts")
    coefficients: FloatArray = Field(..., description="q x K thresholded coefficients")
    residual_sd: Optional[float] = Field(None, description="Gaussian residual sd (standardized scale)")


class NodeMeta(BaseModel):
    """Selection summary of one node regression."""

    node: int = Field(..., ge=0, description="Response variable")
    family: Family = Field(..., description="Response family")
    lam: float = Field(..., description="Selected lambda")
    alpha: float = Field(..., description="Selected alpha")
    s0: int = Field(..., ge=0, description="Nonzero coefficients after thresholding")
    loglik: float = Field(..., description="Weighted log-likelihood at the selected fit")
    deviance: float = Field(..., description="-2 * loglik")
    n_eff: float = Field(..., description="Effective sample size")
    n_columns: int = Field(..., ge=0, description="Design columns")
    tau: float = Field(default=0.0, description="Applied threshold")
    criterion: Optional[float] = Field(None, description="Selection criterion at the chosen lambda")
    converged: bool = Field(default=True, description="Solver convergence at the chosen lambda")
    warnings: List[str] = Field(default_factory=list, description="Recorded warnings")


class RawFactor(BaseModel):
    """A recovered factor with its combined parameter array."""

    members: Tuple[int, ...] = Field(..., description="Sorted member variables")
    parameters: FloatArray = Field(..., description="One axis per member, full level range")
    weight: float = Field(..., ge=0.0, description="Aggregated magnitude")

    @property
    def order(self) -> int:
        return len(self.members)


class FactorNode(BaseModel):
    """Factor node of a factor graph."""

    members: Tuple[int, ...] = Field(..., description="Member variables")
    weight: float = Field(..., gt=0.0, description="Mean absolute parameter")


class FactorEdge(BaseModel):
    """Edge between a factor node and one of its member variables."""

    factor: int = Field(..., ge=0, description="Factor node index")
    variable: int = Field(..., ge=0, description="Variable node index")
    weight: float = Field(..., gt=0.0, description="Weight of the factor")


class FactorGraph(BaseModel):
    """Bipartite graph of variable nodes and factor nodes."""

    n_variables: int = Field(..., ge=0, description="Number of variable nodes")
    factors: List[FactorNode] = Field(default_factory=list, description="Factor nodes")
    edges: List[FactorEdge] = Field(default_factory=list, description="Factor-variable edges")


class MgmFit(BaseModel):
    """Estimated k-order mixed graphical model."""

    model_type: Literal["mgm"] = "mgm"
    specs: List[VariableSpec] = Field(..., description="Variable specs")
    names: List[str] = Field(..., description="Variable names")
    options: MgmOptions = Field(..., description="Options used")
    wadj: FloatArray = Field(..., description="p x p symmetric weighted adjacency")
    signs: SignArray = Field(..., description="p x p signs, NaN when undefined")
    rawfactors: List[RawFactor] = Field(default_factory=list, description="Recovered factors")
    intercepts: List[FloatArray] = Field(..., description="Per-variable threshold estimates")
    nodemeta: List[NodeMeta] = Field(..., description="Per-node selection summary")
    node_models: List[NodeModel] = Field(..., description="Per-node regressions")
    scaling: VariableScaling = Field(..., description="Gaussian standardization")
    warnings: List[str] = Field(default_factory=list, description="Recorded warnings")

    @model_validator(mode="after")
    def check_adjacency(self) -> "MgmFit":
        p = len(self.specs)
        if self.wadj.shape != (p, p) or self.signs.shape != (p, p):
            raise ValueError("wadj and signs must be p x p")
        if np.any(self.wadj < 0) or np.any(np.diag(self.wadj) != 0):
            raise ValueError("wadj must be nonnegative with a zero diagonal")
        if not np.array_equal(self.wadj, self.wadj.T):
            raise ValueError("wadj must be symmetric")
        if np.any(~np.isnan(self.signs) & (self.wadj == 0)):
            raise ValueError("signs may only be defined on edges")
        return self

    @property
    def p(self) -> int:
        return len(self.specs)

    def edges(self) -> List[Tuple[int, int]]:
        """Undirected edges (i < j) with positive weight."""
        rows, cols = np.nonzero(np.triu(self.wadj, 1))
        return list(zip(rows.tolist(), cols.tolist()))


class MvarFit(BaseModel):
    """Estimated mixed VAR model; columns predict rows."""

    model_type: Literal["mvar"] = "mvar"
    specs: List[VariableSpec] = Field(..., description="Variable specs")
    names: List[str] = Field(..., description="Variable names")
    lags: List[int] = Field(..., min_length=1, description="Lag set")
    options: MvarOptions = Field(..., description="Options used")
    wadj: FloatArray = Field(..., description="p x p x |L|; [i, j, l] is the effect of j on i at lags[l]")
    signs: SignArray = Field(..., description="Same shape as wadj, NaN when undefined")
    coefficients: MvarCoefficients = Field(..., description="Thresholded lagged parameters (standardized scale)")
    intercepts: List[FloatArray] = Field(..., description="Per-variable threshold estimates")
    inclusion_mask: BoolArray = Field(..., description="Rows usable as responses")
    nodemeta: List[NodeMeta] = Field(..., description="Per-node selection summary")
    node_models: List[NodeModel] = Field(..., description="Per-node regressions")
    scaling: VariableScaling = Field(..., description="Gaussian standardization")
    warnings: List[str] = Field(default_factory=list, description="Recorded warnings")

    @model_validator(mode="after")
    def check_adjacency(self) -> "MvarFit":
        p = len(self.specs)
        if self.wadj.shape != (p, p, len(self.lags)) or self.signs.shape != self.wadj.shape:
            raise ValueError("wadj and signs must be p x p x |L|")
        if np.any(self.wadj < 0):
            raise ValueError("wadj must be nonnegative")
        if not np.any(self.inclusion_mask):
            raise ValueError("inclusion_mask has no usable row")
        return self

    @property
    def p(self) -> int:
        return len(self.specs)

    @property
    def n_usable(self) -> int:
        return int(np.count_nonzero(self.inclusion_mask))


StationaryFit = Annotated[Union[MgmFit, MvarFit], Field(discriminator="model_type")]


class TvFit(BaseModel):
    """Time-varying model: one stationary fit per estimation point."""

    model_type: Literal["tvmgm", "tvmvar"] = Field(..., description="Model class")
    estpoints: FloatArray = Field(..., description="Sorted estimation points in [0, 1]")
    bandwidth: float = Field(..., gt=0.0, description="Kernel bandwidth")
    fits: List[StationaryFit] = Field(..., description="One fit per estimation point")
    local_n: FloatArray = Field(..., description="Sum of kernel weights per estimation point")
    point_warnings: List[Optional[str]] = Field(default_factory=list, description="Per-point warning")

    @model_validator(mode="after")
    def check_points(self) -> "TvFit":
        if self.estpoints.ndim != 1 or self.estpoints.size < 1:
            raise ValueError("at least one estimation point is required")
        if np.any(self.estpoints < 0) or np.any(self.estpoints > 1):
            raise ValueError("estimation points must lie in [0, 1]")
        if np.any(np.diff(self.estpoints) < 0):
            raise ValueError("estimation points must be sorted")
        if len(self.fits) != self.estpoints.size or self.local_n.shape != self.estpoints.shape:
            raise ValueError("one fit and one local_n per estimation point")
        return self

    @property
    def specs(self) -> List[VariableSpec]:
        return self.fits[0].specs

    @property
    def names(self) -> List[str]:
        return self.fits[0].names

    @property
    def p(self) -> int:
        return len(self.specs)


AnyFit = Union[MgmFit, MvarFit, TvFit]
