"""Fit documents and sampling specifications (JSON)."""

import json
from pathlib import Path
from typing import Optional, Union

import structlog
from pydantic import TypeAdapter
from pydantic import ValidationError as PydanticValidationError

from core.config import Settings, get_settings
from core.exceptions import SchemaVersionError, SerializationError
from models.fits import AnyFit
from models.io import FitDocument, SamplingDocument

logger = structlog.get_logger(__name__)

PathLike = Union[str, Path]

_sampling_adapter = TypeAdapter(SamplingDocument)


def dump_fit(fit: AnyFit, command: Optional[str] = None, settings: Optional[Settings] = None) -> str:
    """Fit document text; floats are written in shortest round-trip form."""
    settings = settings or get_settings()
    document = FitDocument(
        schema_version=settings.schema_version,
        model_type=fit.model_type,
        command=command,
        fit=fit,
    )
    return document.model_dump_json(indent=2) + "\n"


def save_fit(fit: AnyFit, path: PathLike, command: Optional[str] = None, settings: Optional[Settings] = None) -> None:
    """Write a fit document."""
    Path(path).write_text(dump_fit(fit, command, settings), encoding="utf-8")
    logger.info("Fit saved", path=str(path), model=fit.model_type)


def _parse_json(text: str, source: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        offset = len(text[: e.pos].encode("utf-8"))
        raise SerializationError(
            f"{source}: parse error at byte {offset}: {e.msg}", byte_offset=offset, cause=e
        ) from e


def parse_fit(text: str, source: str = "document", settings: Optional[Settings] = None) -> FitDocument:
    """Parse fit document text.

    Raises:
        SerializationError: Malformed JSON (with byte offset) or invalid content.
        SchemaVersionError: Written under another schema version.
    """
    settings = settings or get_settings()
    raw = _parse_json(text, source)
    if not isinstance(raw, dict):
        raise SerializationError(f"{source}: a fit document must be a JSON object")
    found = str(raw.get("schema_version"))
    if found != settings.schema_version:
        raise SchemaVersionError(found, settings.schema_version)
    try:
        return FitDocument.model_validate(raw)
    except PydanticValidationError as e:
        raise SerializationError(f"{source}: invalid fit document: {e.errors()[0]['msg']}", cause=e) from e


def load_fit(path: PathLike, settings: Optional[Settings] = None) -> AnyFit:
    """Read the fit stored in a fit document."""
    document = parse_fit(Path(path).read_text(encoding="utf-8"), str(path), settings)
    logger.info("Fit loaded", path=str(path), model=document.model_type)
    return document.fit


def load_sampling_spec(path: PathLike) -> Union[SamplingDocument]:
    """Read a sampling specification (``model_type`` mgm or mvar).

    Raises:
        SerializationError: Malformed JSON or invalid specification.
    """
    raw = _parse_json(Path(path).read_text(encoding="utf-8"), str(path))
    try:
        return _sampling_adapter.validate_python(raw)
    except PydanticValidationError as e:
        raise SerializationError(f"{path}: invalid sampling specification: {e.errors()[0]['msg']}", cause=e) from e
