"""Exception types shared across the package.

Faults (unreadable files, unknown ids, unreachable backends) are exceptions;
data problems found by the validators are reported as ValidationReport
entries instead and never raise.
"""

from __future__ import annotations


class Nl2ApiError(Exception):
    """Base class for every error raised by this package."""


# --- catalog ---------------------------------------------------------------

class FileUnreadable(Nl2ApiError):
    pass


class MalformedCatalog(Nl2ApiError):
    pass


class CatalogInvariantViolation(Nl2ApiError):
    def __init__(self, report):
        self.report = report
        lines = "; ".join(v.message for v in report.violations)
        super().__init__(f"catalog violates invariants: {lines}")


class UnknownApiId(Nl2ApiError):
    pass


# --- command parsing -------------------------------------------------------

class CommandParseError(Nl2ApiError):
    """Base for the three parse failure modes."""


class NoJsonObjectFound(CommandParseError):
    pass


class JsonSyntaxError(CommandParseError):
    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} (at offset {position})")


class SchemaError(CommandParseError):
    pass


# --- router ----------------------------------------------------------------

class TemplateMissingPlaceholder(Nl2ApiError):
    pass


class BackendUnreachable(Nl2ApiError):
    pass


class UnrecognizedBackendOutput(Nl2ApiError):
    def __init__(self, raw: str):
        self.raw = raw
        super().__init__(f"backend output is neither a catalog id nor UNRESOLVABLE: {raw!r}")


class CommandInvalid(Nl2ApiError):
    def __init__(self, report):
        self.report = report
        lines = "; ".join(v.message for v in report.violations)
        super().__init__(f"no valid command after retries: {lines}")


class UnknownStageMarker(Nl2ApiError):
    pass


# --- baselines -------------------------------------------------------------

class EmptyCorpus(Nl2ApiError):
    pass


class UnknownDocId(Nl2ApiError):
    pass


# --- store / executor ------------------------------------------------------

class UnknownTableApiId(Nl2ApiError):
    pass


class ColumnMismatch(Nl2ApiError):
    pass


class CellTypeError(Nl2ApiError):
    def __init__(self, message: str, row: int, column: str):
        self.row = row
        self.column = column
        super().__init__(f"{message} (row {row}, column {column!r})")


class PreconditionViolated(Nl2ApiError):
    pass


class UnknownColumn(Nl2ApiError):
    pass


# --- datagen ---------------------------------------------------------------

class NoNegativeTemplates(Nl2ApiError):
    pass


class NegativeRecordInStage2(Nl2ApiError):
    pass


class FileUnwritable(Nl2ApiError):
    pass


# --- eval ------------------------------------------------------------------

class LengthMismatch(Nl2ApiError):
    pass


# --- service / cli ---------------------------------------------------------

class ConfigError(Nl2ApiError):
    pass
