"""Estimator option models."""

from enum import Enum

from pydantic import Field

from .common import BaseModel
from .selection import SelectionSpec


class CombineRule(str, Enum):
    """Rule turning the per-regression estimates of one factor into one."""

    AND = "and"
    OR = "or"


class MgmOptions(BaseModel):
    """Options of k-order MGM estimation."""

    k: int = Field(default=2, ge=2, description="Maximal factor order")
    rule: CombineRule = Field(default=CombineRule.AND, description="AND/OR combination rule")
    overparameterize: bool = Field(default=False, description="One indicator per category")
    binary_sign: bool = Field(default=False, description="Report signs for binary variables")
    selection: SelectionSpec = Field(default_factory=SelectionSpec, description="Tuning selection")


class MvarOptions(BaseModel):
    """Options of mixed VAR estimation (the lag set is passed separately)."""

    overparameterize: bool = Field(default=False, description="One indicator per category")
    binary_sign: bool = Field(default=False, description="Report signs for binary variables")
    selection: SelectionSpec = Field(default_factory=SelectionSpec, description="Tuning selection")
