"""Pydantic models for the application.

This module contains the domain types shared by the estimators, samplers
and the file formats: variable specifications, datasets, factor models,
regression designs, fits and prediction results.
"""

from .common import UNDEFINED_SIGN, BaseModel, sign_label
from .factor import FactorModel, JointTable, MvarCoefficients, MvarModel, validate_model, validate_mvar_model
from .fits import FactorGraph, MgmFit, MvarFit, NodeMeta, NodeModel, RawFactor, TvFit
from .glm import Family, GlmProblem, GlmSolution
from .io import BandwidthDocument, DataSchema, FitDocument, MgmSampling, MvarSampling
from .options import CombineRule, MgmOptions, MvarOptions
from .prediction import NodeError, PredictionResult, TvMethod
from .selection import SelectionMethod, SelectionSpec, ThresholdMode
from .timevarying import BandwidthSelection, KernelWeights
from .variables import Dataset, VariableKind, VariableSpec

__all__ = [
    # Variables and data
    "Dataset",
    "VariableKind",
    "VariableSpec",
    # Model specifications
    "FactorModel",
    "JointTable",
    "MvarCoefficients",
    "MvarModel",
    "validate_model",
    "validate_mvar_model",
    # Regression
    "Family",
    "GlmProblem",
    "GlmSolution",
    "SelectionMethod",
    "SelectionSpec",
    "ThresholdMode",
    # Estimation
    "CombineRule",
    "MgmOptions",
    "MvarOptions",
    "FactorGraph",
    "MgmFit",
    "MvarFit",
    "NodeMeta",
    "NodeModel",
    "RawFactor",
    "TvFit",
    "BandwidthSelection",
    "KernelWeights",
    # Prediction
    "NodeError",
    "PredictionResult",
    "TvMethod",
    # File formats
    "BandwidthDocument",
    "DataSchema",
    "FitDocument",
    "MgmSampling",
    "MvarSampling",
    # Common
    "BaseModel",
    "UNDEFINED_SIGN",
    "sign_label",
]
