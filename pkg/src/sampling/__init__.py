"""Samplers for MGMs, mixed VAR models and their time-varying versions."""

from .exact import exact_joint_small
from .gibbs import GibbsSampler, sample_mgm, sample_tvmgm
from .var import sample_mvar, sample_tvmvar

__all__ = [
    "GibbsSampler",
    "exact_joint_small",
    "sample_mgm",
    "sample_mvar",
    "sample_tvmgm",
    "sample_tvmvar",
]
