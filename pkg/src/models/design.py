"""Regression design models.

A design matrix is described column by column so that the same columns
can be rebuilt on new data for prediction and mapped back onto factor
parameter arrays after fitting.
"""

from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from pydantic import Field

from .common import BaseModel, FloatArray, IntArray


class ColumnKind(str, Enum):
    """How a design column is scaled."""

    CONTINUOUS = "continuous"  # centered and scaled
    COUNT = "count"            # centered only
    INDICATOR = "indicator"    # left as is
    MIXED = "mixed"            # continuous times indicator, left as is


class ColumnMeta(BaseModel):
    """Description of one design column."""

    sources: Tuple[int, ...] = Field(..., description="Predictor variables multiplied in this column")
    categories: Tuple[Optional[int], ...] = Field(
        ..., description="Category indicated per source (None for continuous sources)"
    )
    lag: Optional[int] = Field(None, description="Lag of the predictors (VAR designs)")
    kind: ColumnKind = Field(..., description="Scaling rule")
    group: int = Field(..., ge=0, description="Index of the interaction term this column belongs to")


class Term(BaseModel):
    """One predictor subset (and lag) of a nodewise design."""

    sources: Tuple[int, ...] = Field(..., description="Predictor variables")
    lag: Optional[int] = Field(None, description="Lag (VAR designs)")


class ScaleRecord(BaseModel):
    """Centering and scaling applied to the kept design columns."""

    centers: FloatArray = Field(..., description="Subtracted per column")
    scales: FloatArray = Field(..., description="Divisor per column")
    dropped: List[ColumnMeta] = Field(default_factory=list, description="Zero-variance columns removed")
    warnings: List[str] = Field(default_factory=list, description="One message per dropped column")

    def apply(self, raw: np.ndarray) -> np.ndarray:
        """Scale raw columns built from the kept column descriptions."""
        return (raw - self.centers) / self.scales


class DesignMatrix(BaseModel):
    """Nodewise regression design."""

    target: int = Field(..., ge=0, description="Response variable")
    columns: FloatArray = Field(..., description="n_eff x q matrix")
    colmeta: List[ColumnMeta] = Field(..., description="One description per column")
    terms: List[Term] = Field(..., description="Predictor subsets, indexed by group id")
    rows: IntArray = Field(..., description="Data rows used as responses")
    scale: Optional[ScaleRecord] = Field(None, description="Scaling applied to the columns")

    @property
    def n_rows(self) -> int:
        return int(self.columns.shape[0])

    @property
    def q(self) -> int:
        return int(self.columns.shape[1])

    @property
    def groups(self) -> np.ndarray:
        return np.array([c.group for c in self.colmeta], dtype=np.int64)

    def factor_of(self, group: int) -> Tuple[int, ...]:
        """Factor tuple (target plus predictors) of a group."""
        return tuple(sorted(self.terms[group].sources + (self.target,)))


class VariableScaling(BaseModel):
    """Dataset-level standardization of gaussian variables.

    Non-gaussian variables carry mean 0 and sd 1 so that the transform is
    the identity for them.
    """

    means: FloatArray = Field(..., description="Per-variable mean")
    sds: FloatArray = Field(..., description="Per-variable sd")

    def forward(self, values: np.ndarray) -> np.ndarray:
        return (values - self.means) / self.sds

    def backward(self, values: np.ndarray) -> np.ndarray:
        return values * self.sds + self.means


class NodeDesign(BaseModel):
    """Scaled design and response of one node regression."""

    design: DesignMatrix = Field(..., description="Scaled design")
    response: FloatArray = Field(..., description="Response per design row")
