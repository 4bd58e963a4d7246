"""File format models: data schemas, sampling specifications and fit documents."""

from typing import Annotated, List, Literal, Optional, Union

from pydantic import Field, model_validator

from .common import BaseModel
from .factor import FactorModel, MvarModel
from .fits import MgmFit, MvarFit, TvFit
from .timevarying import BandwidthSelection
from .variables import VariableKind, VariableSpec


class VariableEntry(BaseModel):
    """One data column declared by a schema."""

    name: str = Field(..., min_length=1, description="CSV column name")
    kind: VariableKind = Field(..., description="Variable type")
    levels: int = Field(default=1, ge=1, description="Number of categories (1 for continuous)")

    @property
    def spec(self) -> VariableSpec:
        return VariableSpec(kind=self.kind, levels=self.levels)


class DataSchema(BaseModel):
    """Column layout of a CSV dataset."""

    variables: List[VariableEntry] = Field(..., min_length=1, description="Modelled columns, in order")
    timepoints: Optional[str] = Field(None, description="Column holding measurement times")
    consec: Optional[str] = Field(None, description="Column holding the consecutiveness counter")

    @model_validator(mode="after")
    def check_names(self) -> "DataSchema":
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        for extra in (self.timepoints, self.consec):
            if extra is not None and extra in names:
                raise ValueError(f"column {extra} cannot be both a variable and metadata")
        return self


class MgmSampling(BaseModel):
    """Sampling specification of a (time-varying) MGM."""

    model_type: Literal["mgm"] = "mgm"
    names: Optional[List[str]] = Field(None, description="Column names of the sampled data")
    model: Optional[FactorModel] = Field(None, description="Stationary model")
    models: Optional[List[FactorModel]] = Field(None, description="One model per row (time-varying)")
    burn_in: Optional[int] = Field(None, ge=0, description="Burn-in sweeps")
    thin: Optional[int] = Field(None, ge=1, description="Sweeps per kept row")

    @model_validator(mode="after")
    def check_one(self) -> "MgmSampling":
        if (self.model is None) == (self.models is None):
            raise ValueError("give exactly one of model and models")
        return self


class MvarSampling(BaseModel):
    """Sampling specification of a (time-varying) mixed VAR model."""

    model_type: Literal["mvar"] = "mvar"
    names: Optional[List[str]] = Field(None, description="Column names of the sampled data")
    model: Optional[MvarModel] = Field(None, description="Stationary model")
    models: Optional[List[MvarModel]] = Field(None, description="One model per row (time-varying)")

    @model_validator(mode="after")
    def check_one(self) -> "MvarSampling":
        if (self.model is None) == (self.models is None):
            raise ValueError("give exactly one of model and models")
        return self


SamplingDocument = Annotated[Union[MgmSampling, MvarSampling], Field(discriminator="model_type")]


AnyFitField = Annotated[Union[MgmFit, MvarFit, TvFit], Field(discriminator="model_type")]


class FitDocument(BaseModel):
    """Serialized fit with its format version and reproduction command."""

    schema_version: str = Field(..., description="Format version")
    model_type: Literal["mgm", "mvar", "tvmgm", "tvmvar"] = Field(..., description="Model class")
    command: Optional[str] = Field(None, description="Command line that produced the fit")
    fit: AnyFitField = Field(..., description="The fit")


class BandwidthDocument(BaseModel):
    """Serialized bandwidth search with its reproduction command."""

    schema_version: str = Field(..., description="Format version")
    command: Optional[str] = Field(None, description="Command line that produced the search")
    selection: BandwidthSelection = Field(..., description="Cross-validation outcome")
