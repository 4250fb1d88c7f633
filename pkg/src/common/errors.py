"""Exception hierarchy shared by every arrlab module."""

from __future__ import annotations

from typing import Any, Dict


class ArrlabError(Exception):
    """Base error with a stable code and the CLI exit status it maps to."""

    code = "INTERNAL_ERROR"
    exit_code = 4

    def __init__(self, message: str, **context: Any) -> None:
        super().__init__(message)
        self.message = message
        self.context: Dict[str, Any] = context

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"code": self.code, "message": self.message}
        if self.context:
            payload["context"] = {k: str(v) for k, v in sorted(self.context.items())}
        return payload


class ParseError(ArrlabError):
    code = "PARSE_ERROR"
    exit_code = 2


class NonReducedError(ArrlabError):
    code = "NON_REDUCED"
    exit_code = 2


class ConstructionFailedError(ArrlabError):
    code = "CONSTRUCTION_FAILED"
    exit_code = 2


class NotStabilizedError(ArrlabError):
    """Milnor algebra dimensions did not settle by degree 3d-5."""

    code = "NOT_STABILIZED"
    exit_code = 2


class UnsupportedInputError(ArrlabError):
    code = "UNSUPPORTED_INPUT"
    exit_code = 2


class NotEssentialError(ArrlabError):
    """All lines pass through one point (mdr = 0)."""

    code = "NOT_ESSENTIAL"
    exit_code = 3


class InternalError(ArrlabError):
    """A checked identity failed; always a bug, never bad input."""

    code = "INTERNAL_ERROR"
    exit_code = 4


class FieldMismatchError(ArrlabError):
    code = "FIELD_MISMATCH"
    exit_code = 4
