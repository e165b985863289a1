"""
modules/errors.py

Exceptions shared by every algorithm module. Verifiers return result objects
instead of raising; constructions raise these.
"""

from __future__ import annotations

from typing import Any, Dict, Optional


class HighwayError(Exception):
    """Base class for every error raised by the toolkit."""


class GraphParseError(HighwayError, ValueError):
    def __init__(self, message: str, *, path: Optional[str] = None, line_number: Optional[int] = None):
        location = ""
        if path is not None:
            location = f"{path}:{line_number}: " if line_number is not None else f"{path}: "
        super().__init__(f"{location}{message}")
        self.path = path
        self.line_number = line_number


class DisconnectedGraphError(HighwayError, ValueError):
    def __init__(self, first: int, second: int, components: int):
        super().__init__(
            f"graph is disconnected ({components} components); "
            f"vertices {first} and {second} lie in different components"
        )
        self.representatives = (first, second)
        self.components = components


class ParameterError(HighwayError, ValueError):
    """Parameter outside its legal range."""


class PreconditionError(ParameterError):
    """Operation called on inputs that violate its precondition."""


class InvariantViolation(HighwayError, RuntimeError):
    """A runtime check that the construction guarantees has failed."""

    def __init__(self, message: str, witness: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.witness = dict(witness or {})
