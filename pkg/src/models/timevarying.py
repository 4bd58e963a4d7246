"""Kernel weighting and bandwidth-selection models."""

from typing import List, Literal

import numpy as np
from pydantic import Field, model_validator

from .common import BaseModel, FloatArray, IntArray


class KernelWeights(BaseModel):
    """Gaussian kernel weights of all rows for one estimation point."""

    weights: FloatArray = Field(..., description="Per-row weight in [0, 1]")
    t_e: float = Field(..., ge=0.0, le=1.0, description="Estimation point on the normalized time scale")
    sigma: float = Field(..., gt=0.0, description="Bandwidth")
    local_n: float = Field(..., ge=0.0, description="Sum of the weights")

    @model_validator(mode="after")
    def check_weights(self) -> "KernelWeights":
        if np.any(self.weights < 0) or np.any(self.weights > 1):
            raise ValueError("kernel weights must lie in [0, 1]")
        return self


class BandwidthSelection(BaseModel):
    """Outcome of time-stratified cross-validation over bandwidths."""

    model_type: Literal["mgm", "mvar"] = Field(..., description="Model class that was cross-validated")
    bandwidths: FloatArray = Field(..., description="Candidate bandwidths, in input order")
    errors: FloatArray = Field(..., description="Error per bandwidth x fold x variable")
    mean_errors: FloatArray = Field(..., description="Mean error per bandwidth")
    selected: float = Field(..., gt=0.0, description="Bandwidth with the smallest mean error")
    test_rows: List[IntArray] = Field(..., description="Held-out data rows per fold")
