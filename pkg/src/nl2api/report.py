"""Validation findings as data.

Every validator in the package (catalog checks, command checks, dataset
filters) reports problems through the same ValidationReport shape so that
callers, the repair loop and the review-queue export all speak one format.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class ViolationCode(str, Enum):
    # catalog structure
    EMPTY_CATALOG = "EMPTY_CATALOG"
    DUP_API_ID = "DUP_API_ID"
    BAD_API_ID = "BAD_API_ID"
    DUP_ARG = "DUP_ARG"
    EMPTY_ARG_NAME = "EMPTY_ARG_NAME"
    BAD_VALUE_TYPE = "BAD_VALUE_TYPE"
    ENUM_EMPTY = "ENUM_EMPTY"
    ENUM_UNEXPECTED = "ENUM_UNEXPECTED"
    # command content
    ID_MISMATCH = "ID_MISMATCH"
    UNKNOWN_API = "UNKNOWN_API"
    MISSING_INPUT = "MISSING_INPUT"
    UNKNOWN_INPUT = "UNKNOWN_INPUT"
    TYPE_MISMATCH = "TYPE_MISMATCH"
    UNKNOWN_OUTPUT = "UNKNOWN_OUTPUT"
    EMPTY_INFO = "EMPTY_INFO"
    DUP_INFO = "DUP_INFO"
    # wrappers used when a parse failure is folded into a report
    # (e.g. by the repair loop or the dataset filter)
    NO_JSON = "NO_JSON"
    JSON_SYNTAX = "JSON_SYNTAX"
    SCHEMA = "SCHEMA"
    EMPTY_QUERY = "EMPTY_QUERY"


@dataclass(frozen=True)
class Violation:
    code: ViolationCode
    path: str
    message: str

    def to_obj(self) -> dict:
        return {"code": self.code.value, "path": self.path, "message": self.message}

    @classmethod
    def from_obj(cls, obj: dict) -> "Violation":
        return cls(ViolationCode(obj["code"]), obj["path"], obj["message"])


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def empty(self) -> bool:
        return not self.violations

    def codes(self) -> set[ViolationCode]:
        return {v.code for v in self.violations}

    def has(self, code: ViolationCode) -> bool:
        return any(v.code is code for v in self.violations)

    def messages(self) -> list[str]:
        return [v.message for v in self.violations]

    def to_obj(self) -> list[dict]:
        return [v.to_obj() for v in self.violations]

    @classmethod
    def from_obj(cls, obj: list[dict]) -> "ValidationReport":
        return cls(tuple(Violation.from_obj(v) for v in obj))

    def __len__(self) -> int:
        return len(self.violations)


def report_of(*violations: Violation) -> ValidationReport:
    return ValidationReport(tuple(violations))
