"""Prediction result models."""

from enum import Enum
from typing import Dict, List, Optional

import numpy as np
from pydantic import Field, model_validator

from .common import BaseModel, FloatArray, IntArray


class TvMethod(str, Enum):
    """How time-varying models predict a row."""

    WEIGHTED = "weighted"
    CLOSEST = "closest"


class NodeError(BaseModel):
    """Prediction errors of one variable.

    ``metrics`` holds the reported values (R2 and nCC clamped at 0, None
    where undefined); ``raw`` keeps the unclamped values.
    """

    node: int = Field(..., ge=0, description="Variable index")
    name: str = Field(..., description="Variable name")
    metrics: Dict[str, Optional[float]] = Field(default_factory=dict, description="Reported metric values")
    raw: Dict[str, Optional[float]] = Field(default_factory=dict, description="Unclamped metric values")


class PredictionResult(BaseModel):
    """Predicted values, class probabilities and nodewise errors."""

    rows: IntArray = Field(..., description="Data rows that received predictions")
    predicted: FloatArray = Field(..., description="n x p predictions on the data scale, NaN where undefined")
    probabilities: List[Optional[FloatArray]] = Field(
        ..., description="Per variable n x m class probabilities (None for non-categorical)"
    )
    errors: List[NodeError] = Field(..., description="Per-node errors over the predicted rows")
    tv_errors: Optional[List[List[NodeError]]] = Field(
        None, description="Per estimation point, kernel-weighted errors of that point's model"
    )

    @model_validator(mode="after")
    def check_probabilities(self) -> "PredictionResult":
        for probs in self.probabilities:
            if probs is None:
                continue
            sums = probs[self.rows].sum(axis=1)
            if not np.allclose(sums, 1.0, atol=1e-10):
                raise ValueError("probability rows must sum to 1")
        return self
