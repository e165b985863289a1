"""
database/documents.py

JSON documents and terminal files on disk.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Type, TypeVar

import numpy as np
from pydantic import BaseModel, ValidationError

from modules.errors import GraphParseError

logger = logging.getLogger(__name__)

Model = TypeVar("Model", bound=BaseModel)


def _plain(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def dump_json(data) -> str:
    """JSON text; numpy scalars and arrays inside metrics and witnesses become plain values."""
    return json.dumps(data, indent=2, default=_plain)


def dump_model(model: BaseModel) -> str:
    return dump_json(model.model_dump(by_alias=True))


def write_document(model: BaseModel, path: str | Path) -> None:
    Path(path).write_text(dump_model(model) + "\n")
    logger.debug("wrote %s to %s", type(model).__name__, path)


def read_document(path: str | Path, model: Type[Model]) -> Model:
    text = Path(path).read_text()
    try:
        return model.model_validate_json(text)
    except ValidationError as e:
        raise GraphParseError(f"not a valid {model.__name__}: {e.error_count()} problems, first: {e.errors()[0]['msg']}", path=str(path)) from e


def sniff_document(path: str | Path) -> dict:
    """Raw JSON object, for dispatching on its keys."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise GraphParseError(f"invalid JSON: {e.msg}", path=str(path), line_number=e.lineno) from e
    if not isinstance(data, dict):
        raise GraphParseError("expected a JSON object", path=str(path))
    return data


def read_terminals(path: str | Path) -> np.ndarray:
    """Whitespace-separated 0-based vertex ids; '#' starts a comment."""
    ids = []
    for number, line in enumerate(Path(path).read_text().splitlines(), start=1):
        for token in line.split("#", 1)[0].split():
            try:
                ids.append(int(token))
            except ValueError:
                raise GraphParseError(f"terminal id '{token}' is not an integer", path=str(path), line_number=number)
    return np.asarray(ids, dtype=np.int64)


def write_terminals(terminals, path: str | Path) -> None:
    Path(path).write_text("\n".join(str(int(t)) for t in terminals) + "\n")
