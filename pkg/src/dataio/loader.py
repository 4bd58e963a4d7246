"""CSV datasets described by a JSON schema."""

from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
import pandas as pd
import structlog
from pydantic import ValidationError as PydanticValidationError

from core.exceptions import ValidationError
from models.io import DataSchema, VariableEntry
from models.variables import Dataset, VariableKind

logger = structlog.get_logger(__name__)

PathLike = Union[str, Path]
FLOAT_FORMAT = "%.17g"


def read_schema(path: PathLike) -> DataSchema:
    """Parse a schema file.

    Raises:
        ValidationError: Unreadable or invalid schema.
    """
    try:
        return DataSchema.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except PydanticValidationError as e:
        raise ValidationError(f"invalid schema {path}", violations=[err["msg"] for err in e.errors()], cause=e) from e


def _recode_categorical(column: np.ndarray, entry: VariableEntry) -> Tuple[np.ndarray, List[str]]:
    """Dense 0-based codes and the original label of every code.

    Columns within 0..m-1 are kept, columns within 1..m are shifted down.
    """
    if np.any(column != np.round(column)):
        raise ValidationError(f"column {entry.name}: non-integer categorical cell")
    observed = np.unique(column)
    if observed.size > entry.levels:
        raise ValidationError(
            f"column {entry.name}: {observed.size} observed categories exceed the declared {entry.levels} levels"
        )
    low, high = int(column.min()), int(column.max())
    if low >= 0 and high <= entry.levels - 1:
        return column, [str(c) for c in range(entry.levels)]
    if low >= 1 and high <= entry.levels:
        return column - 1, [str(c) for c in range(1, entry.levels + 1)]
    raise ValidationError(f"column {entry.name}: code out of range for {entry.levels} levels")


def load_dataset(data_path: PathLike, schema_path: PathLike) -> Dataset:
    """Read a CSV file with a header row into a typed dataset.

    Lines starting with ``#`` are ignored. Categorical columns are recoded
    to dense 0-based codes; the original labels are kept in ``code_maps``.

    Raises:
        ValidationError: Missing columns, missing or non-numeric cells,
            invalid categorical codes, or dataset invariants.
    """
    schema = read_schema(schema_path)
    frame = pd.read_csv(data_path, comment="#")
    wanted = [v.name for v in schema.variables] + [c for c in (schema.timepoints, schema.consec) if c]
    missing = [name for name in wanted if name not in frame.columns]
    if missing:
        raise ValidationError(f"schema references missing column(s): {', '.join(missing)}", violations=missing)

    columns, code_maps = [], []
    for entry in schema.variables:
        column = pd.to_numeric(frame[entry.name], errors="coerce").to_numpy(dtype=float)
        if np.any(np.isnan(column)):
            raise ValidationError(f"column {entry.name}: missing or non-numeric cells are not supported")
        if entry.kind == VariableKind.CATEGORICAL:
            column, labels = _recode_categorical(column, entry)
            code_maps.append(labels)
        else:
            code_maps.append(None)
        columns.append(column)

    timepoints = frame[schema.timepoints].to_numpy(dtype=float) if schema.timepoints else None
    consec = frame[schema.consec].to_numpy(dtype=np.int64) if schema.consec else None
    try:
        data = Dataset(
            values=np.column_stack(columns),
            specs=[entry.spec for entry in schema.variables],
            timepoints=timepoints,
            consec=consec,
            names=[entry.name for entry in schema.variables],
            code_maps=code_maps,
        )
    except PydanticValidationError as e:
        raise ValidationError(f"invalid dataset {data_path}", violations=[err["msg"] for err in e.errors()], cause=e) from e
    logger.info("Dataset loaded", path=str(data_path), n=data.n, p=data.p)
    return data


def dataset_frame(data: Dataset) -> pd.DataFrame:
    """Dataset as a frame in its input coding, with time and consec columns."""
    frame = pd.DataFrame()
    for j, (name, spec) in enumerate(zip(data.column_names, data.specs)):
        if spec.is_categorical:
            labels = np.array([int(label) for label in data.labels(j)])
            frame[name] = labels[data.codes(j)]
        elif spec.kind == VariableKind.POISSON:
            frame[name] = data.values[:, j].astype(np.int64)
        else:
            frame[name] = data.values[:, j]
    if data.timepoints is not None:
        frame["time"] = data.timepoints
    if data.consec is not None:
        frame["consec"] = data.consec
    return frame


def dataset_schema(data: Dataset) -> DataSchema:
    """Schema matching ``dataset_frame``."""
    return DataSchema(
        variables=[
            VariableEntry(name=name, kind=spec.kind, levels=spec.levels)
            for name, spec in zip(data.column_names, data.specs)
        ],
        timepoints="time" if data.timepoints is not None else None,
        consec="consec" if data.consec is not None else None,
    )


def write_csv(frame: pd.DataFrame, path: PathLike, command: Optional[str] = None) -> None:
    """Write a frame with 17 significant digits, after an optional command line comment."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        if command:
            handle.write(f"# command: {command}\n")
        frame.to_csv(handle, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def write_dataset(data: Dataset, path: PathLike, command: Optional[str] = None) -> Path:
    """Write ``data`` as CSV and its schema next to it.

    Returns:
        Path: The schema file, ``<stem>.schema.json``.
    """
    path = Path(path)
    write_csv(dataset_frame(data), path, command)
    schema_path = path.with_name(f"{path.stem}.schema.json")
    schema_path.write_text(dataset_schema(data).model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.info("Dataset written", path=str(path), schema=str(schema_path), n=data.n)
    return schema_path
