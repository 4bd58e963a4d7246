"""Penalized GLM problem and solution models."""

from enum import Enum
from typing import Optional

import numpy as np
from pydantic import Field, model_validator

from .common import BaseModel, FloatArray
from .design import DesignMatrix


class Family(str, Enum):
    """GLM family enumeration."""

    GAUSSIAN = "gaussian"
    POISSON = "poisson"
    MULTINOMIAL = "multinomial"


class GlmProblem(BaseModel):
    """One weighted elastic-net node regression.

    The objective is ``(1/sum(w)) * sum_t w_t * NLL_t + lam * (alpha * |b|_1
    + (1 - alpha) / 2 * |b|_2^2)`` with unpenalized intercepts.
    """

    family: Family = Field(..., description="Response family")
    n_classes: int = Field(default=1, ge=1, description="Categories of a multinomial response")
    design: DesignMatrix = Field(..., description="Scaled design")
    response: FloatArray = Field(..., description="Response (category codes for multinomial)")
    obs_weights: FloatArray = Field(..., description="Nonnegative observation weights")
    alpha: float = Field(default=1.0, ge=0.0, le=1.0, description="Elastic-net mixing")
    lam: float = Field(default=0.0, ge=0.0, alias="lambda", description="Penalty strength")

    @model_validator(mode="after")
    def check_problem(self) -> "GlmProblem":
        n = self.design.n_rows
        if self.response.shape != (n,):
            raise ValueError("response must have one entry per design row")
        if self.obs_weights.shape != (n,):
            raise ValueError("obs_weights must have one entry per design row")
        if np.any(self.obs_weights < 0):
            raise ValueError("obs_weights must be nonnegative")
        if np.count_nonzero(self.obs_weights > 0) < 2:
            raise ValueError("at least two observations need positive weight")
        if self.family == Family.MULTINOMIAL and self.n_classes < 2:
            raise ValueError("a multinomial response needs at least 2 classes")
        return self

    @property
    def x(self) -> np.ndarray:
        return self.design.columns

    @property
    def n_eff(self) -> float:
        return float(self.obs_weights.sum())

    @property
    def n_outputs(self) -> int:
        return self.n_classes if self.family == Family.MULTINOMIAL else 1

    def with_weights(self, obs_weights: np.ndarray) -> "GlmProblem":
        """Same problem under other observation weights (validated)."""
        return GlmProblem(
            family=self.family,
            n_classes=self.n_classes,
            design=self.design,
            response=self.response,
            obs_weights=obs_weights,
            alpha=self.alpha,
            lam=self.lam,
        )


class GlmSolution(BaseModel):
    """Fitted coefficients of one penalized node regression."""

    family: Family = Field(..., description="Response family")
    coefficients: FloatArray = Field(..., description="q x K coefficients (K classes or 1)")
    intercepts: FloatArray = Field(..., description="K intercepts")
    lam: float = Field(..., description="Penalty strength")
    alpha: float = Field(..., description="Elastic-net mixing")
    loglik: float = Field(..., description="Weighted log-likelihood")
    converged: bool = Field(..., description="Convergence flag")
    residual_sd: Optional[float] = Field(None, description="Gaussian residual sd")
    n_sweeps: int = Field(default=0, description="Coordinate-descent sweeps")
    clamped: bool = Field(default=False, description="Poisson linear predictor hit the clamp")

    @property
    def s0(self) -> int:
        return int(np.count_nonzero(self.coefficients))

    @property
    def beta(self) -> np.ndarray:
        """Coefficients as a vector (single-output families)."""
        return self.coefficients[:, 0]
