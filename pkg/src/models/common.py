"""Common data models.

This module contains the base model and the numpy array field types used
throughout the application. Array fields are copied on validation, frozen
(read-only) and serialized as nested lists in JSON mode.
"""

from typing import Annotated, Any, Optional

import numpy as np
from pydantic import BaseModel as PydanticBaseModel, BeforeValidator, ConfigDict, PlainSerializer

UNDEFINED_SIGN = "u"


class BaseModel(PydanticBaseModel):
    """Base model with common configuration."""

    model_config = ConfigDict(
        # Use enum values instead of enum objects
        use_enum_values=True,
        # Allow population by field name and alias
        populate_by_name=True,
        # Domain objects are immutable once built
        frozen=True,
        # numpy arrays as field types
        arbitrary_types_allowed=True,
    )


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def _to_array(value: Any, dtype: Any) -> Any:
    if value is None:
        return value
    try:
        return _frozen(np.array(value, dtype=dtype))
    except (TypeError, ValueError) as e:
        raise ValueError(f"not convertible to a {np.dtype(dtype).name} array: {e}") from e


def _to_float_array(value: Any) -> Any:
    return _to_array(value, float)


def _to_int_array(value: Any) -> Any:
    return _to_array(value, np.int64)


def _to_bool_array(value: Any) -> Any:
    return _to_array(value, bool)


def _to_sign_array(value: Any) -> Any:
    if value is None:
        return value
    if isinstance(value, np.ndarray) and value.dtype != object:
        return _to_float_array(value)
    raw = np.array(value, dtype=object)
    raw[raw == UNDEFINED_SIGN] = np.nan
    return _to_float_array(raw.astype(float))


def _array_to_list(array: np.ndarray) -> list:
    return array.tolist()


def _signs_to_list(array: np.ndarray) -> list:
    out = array.astype(object)
    out[np.isnan(array)] = UNDEFINED_SIGN
    return out.tolist()


FloatArray = Annotated[
    np.ndarray,
    BeforeValidator(_to_float_array),
    PlainSerializer(_array_to_list, return_type=list, when_used="json"),
]

IntArray = Annotated[
    np.ndarray,
    BeforeValidator(_to_int_array),
    PlainSerializer(_array_to_list, return_type=list, when_used="json"),
]

BoolArray = Annotated[
    np.ndarray,
    BeforeValidator(_to_bool_array),
    PlainSerializer(_array_to_list, return_type=list, when_used="json"),
]

# +1 / -1 with NaN standing for an undefined sign; written as "u" in JSON.
SignArray = Annotated[
    np.ndarray,
    BeforeValidator(_to_sign_array),
    PlainSerializer(_signs_to_list, return_type=list, when_used="json"),
]


def sign_label(value: Optional[float]) -> str:
    """Render one sign entry for text output ("1", "-1" or "u")."""
    if value is None or np.isnan(value):
        return UNDEFINED_SIGN
    return str(int(value))
