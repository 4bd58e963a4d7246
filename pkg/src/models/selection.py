"""Tuning-parameter selection models."""

from enum import Enum
from typing import List, Optional

from pydantic import Field, field_validator

from .common import BaseModel, FloatArray
from .glm import GlmSolution


class SelectionMethod(str, Enum):
    """Penalty selection method."""

    EBIC = "ebic"
    CV = "cv"


class ThresholdMode(str, Enum):
    """Post-selection thresholding mode."""

    LW = "lw"
    NONE = "none"


class SelectionSpec(BaseModel):
    """How lambda and alpha are chosen per node."""

    method: SelectionMethod = Field(default=SelectionMethod.CV, description="EBIC or cross-validation")
    gamma: float = Field(default=0.25, ge=0.0, description="EBIC hyperparameter")
    folds: int = Field(default=10, ge=2, description="Cross-validation folds")
    alpha_seq: List[float] = Field(default_factory=lambda: [1.0], min_length=1, description="Candidate alphas")
    threshold_mode: ThresholdMode = Field(default=ThresholdMode.LW, description="Post-fit threshold")
    seed: int = Field(default=1, description="Seed of the fold assignment")
    n_lambda: Optional[int] = Field(None, ge=2, description="Path length (settings default if unset)")
    min_ratio: Optional[float] = Field(None, gt=0.0, lt=1.0, description="Smallest/largest lambda")

    @field_validator("alpha_seq")
    @classmethod
    def check_alphas(cls, v: List[float]) -> List[float]:
        if any(not 0.0 <= a <= 1.0 for a in v):
            raise ValueError("alpha values must lie in [0, 1]")
        return v


class LambdaSelection(BaseModel):
    """Outcome of a lambda search at one alpha."""

    index: int = Field(..., ge=0, description="Chosen position on the path")
    lambdas: FloatArray = Field(..., description="Penalty sequence")
    criteria: FloatArray = Field(..., description="EBIC or mean out-of-fold NLL per lambda")
    solution: GlmSolution = Field(..., description="Full-data fit at the chosen lambda")

    @property
    def lam(self) -> float:
        return float(self.lambdas[self.index])

    @property
    def criterion(self) -> float:
        return float(self.criteria[self.index])


class AlphaSelection(BaseModel):
    """Outcome of the alpha search."""

    alpha: float = Field(..., description="Chosen alpha")
    selection: LambdaSelection = Field(..., description="Lambda search at the chosen alpha")
    alphas: List[float] = Field(..., description="Alphas searched, in search order")
    criteria: List[float] = Field(..., description="Best criterion per searched alpha")
