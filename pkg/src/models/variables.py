"""Variable and dataset models.

This module contains the typed description of a mixed-variable data
matrix: per-column variable kinds, the values themselves and the optional
time and consecutiveness metadata.
"""

from enum import Enum
from typing import List, Optional

import numpy as np
from pydantic import Field, field_validator, model_validator

from .common import BaseModel, FloatArray, IntArray


class VariableKind(str, Enum):
    """Variable type enumeration."""

    GAUSSIAN = "gaussian"
    POISSON = "poisson"
    CATEGORICAL = "categorical"


_SHORT_KINDS = {"g": VariableKind.GAUSSIAN, "p": VariableKind.POISSON, "c": VariableKind.CATEGORICAL}


class VariableSpec(BaseModel):
    """Kind and number of levels of one variable."""

    kind: VariableKind = Field(..., description="Variable type")
    levels: int = Field(default=1, ge=1, description="Number of categories (1 for continuous)")

    @model_validator(mode="after")
    def check_levels(self) -> "VariableSpec":
        """Categorical variables need at least two levels, others exactly one."""
        if self.kind == VariableKind.CATEGORICAL and self.levels < 2:
            raise ValueError("categorical variables need levels >= 2")
        if self.kind != VariableKind.CATEGORICAL and self.levels != 1:
            raise ValueError(f"{self.kind} variables have levels = 1")
        return self

    @property
    def is_categorical(self) -> bool:
        return self.kind == VariableKind.CATEGORICAL

    @property
    def is_binary(self) -> bool:
        return self.is_categorical and self.levels == 2

    @property
    def family(self) -> str:
        """GLM family used when this variable is a regression response."""
        return "multinomial" if self.is_categorical else str(self.kind)

    @property
    def short(self) -> str:
        """Compact notation: ``g``, ``p`` or ``c:<levels>``."""
        if self.is_categorical:
            return f"c:{self.levels}"
        return "g" if self.kind == VariableKind.GAUSSIAN else "p"

    @classmethod
    def gaussian(cls) -> "VariableSpec":
        return cls(kind=VariableKind.GAUSSIAN)

    @classmethod
    def poisson(cls) -> "VariableSpec":
        return cls(kind=VariableKind.POISSON)

    @classmethod
    def categorical(cls, levels: int) -> "VariableSpec":
        return cls(kind=VariableKind.CATEGORICAL, levels=levels)

    @classmethod
    def parse(cls, text: str) -> "VariableSpec":
        """Parse compact notation (``g``, ``p``, ``c:4``)."""
        head, _, tail = text.strip().partition(":")
        kind = _SHORT_KINDS.get(head.lower())
        if kind is None:
            raise ValueError(f"unknown variable kind '{text}'")
        if kind == VariableKind.CATEGORICAL:
            return cls(kind=kind, levels=int(tail))
        return cls(kind=kind)


def parse_specs(text: str) -> List[VariableSpec]:
    """Parse a comma separated spec list such as ``g,c:2,c:4,g``."""
    return [VariableSpec.parse(part) for part in text.split(",") if part.strip()]


class Dataset(BaseModel):
    """Typed mixed-variable data matrix.

    Categorical columns hold dense integer codes ``0..m-1``; ``code_maps``
    keeps the original label of every code so data can be written back in
    its input coding.
    """

    values: FloatArray = Field(..., description="n x p data matrix")
    specs: List[VariableSpec] = Field(..., description="One spec per column")
    timepoints: Optional[FloatArray] = Field(None, description="Strictly increasing measurement times")
    consec: Optional[IntArray] = Field(None, description="Consecutiveness counter per row")
    names: Optional[List[str]] = Field(None, description="Column names")
    code_maps: Optional[List[Optional[List[str]]]] = Field(
        None, description="Original labels of categorical codes, per column"
    )

    @field_validator("values")
    @classmethod
    def check_matrix(cls, v: np.ndarray) -> np.ndarray:
        if v.ndim != 2:
            raise ValueError("values must be a two-dimensional matrix")
        if v.shape[0] < 2:
            raise ValueError("a dataset needs n >= 2 rows")
        if not np.all(np.isfinite(v)):
            raise ValueError("missing or non-finite cells are not supported")
        return v

    @model_validator(mode="after")
    def check_consistency(self) -> "Dataset":
        """Check column types, metadata lengths and time ordering."""
        n, p = self.values.shape
        if len(self.specs) != p:
            raise ValueError(f"{len(self.specs)} specs for {p} columns")
        for j, spec in enumerate(self.specs):
            column = self.values[:, j]
            label = self.column_names[j] if self.names is not None else f"column {j}"
            if spec.is_categorical:
                if np.any(column != np.round(column)):
                    raise ValueError(f"{label}: categorical cells must be integers")
                if column.min() < 0 or column.max() > spec.levels - 1:
                    raise ValueError(f"{label}: code out of range [0, {spec.levels - 1}]")
            elif spec.kind == VariableKind.POISSON:
                if np.any(column < 0) or np.any(column != np.round(column)):
                    raise ValueError(f"{label}: poisson cells must be nonnegative integers")
        if self.timepoints is not None:
            if self.timepoints.shape != (n,):
                raise ValueError("timepoints must have one entry per row")
            if np.any(np.diff(self.timepoints) <= 0):
                raise ValueError("timepoints must be strictly increasing (ties are rejected)")
        if self.consec is not None and self.consec.shape != (n,):
            raise ValueError("consec must have one entry per row")
        if self.names is not None and len(self.names) != p:
            raise ValueError("names must have one entry per column")
        if self.code_maps is not None and len(self.code_maps) != p:
            raise ValueError("code_maps must have one entry per column")
        return self

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    @property
    def p(self) -> int:
        return int(self.values.shape[1])

    @property
    def column_names(self) -> List[str]:
        """Column names, generated as V1..Vp when none were given."""
        if self.names is not None:
            return list(self.names)
        return [f"V{j + 1}" for j in range(self.values.shape[1])]

    def codes(self, j: int) -> np.ndarray:
        """Integer codes of categorical column ``j``."""
        return self.values[:, j].astype(np.int64)

    def labels(self, j: int) -> List[str]:
        """Original labels of the categories of column ``j``."""
        spec = self.specs[j]
        if self.code_maps is not None and self.code_maps[j] is not None:
            return list(self.code_maps[j])
        return [str(c) for c in range(spec.levels)]
