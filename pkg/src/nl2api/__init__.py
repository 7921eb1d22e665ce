"""nl2api: natural-language queries -> validated, executable API search commands.

A two-stage pipeline routes a query to one API from a catalog, then
generates and validates the JSON command for it; around that sit retrieval
baselines, a desk-scale executor, an instruction-dataset factory, an
evaluation harness, an HTTP service and a CLI.
"""

from .catalog import ApiCatalog, ApiSpec, ArgSpec, load_catalog, render_api_info, render_id_listing, validate_catalog
from .command import ApiCommand, commands_equal, parse_command, serialize_command, validate_command
from .report import ValidationReport, Violation, ViolationCode

__version__ = "0.1.0"

__all__ = [
    "ApiCatalog",
    "ApiCommand",
    "ApiSpec",
    "ArgSpec",
    "ValidationReport",
    "Violation",
    "ViolationCode",
    "commands_equal",
    "load_catalog",
    "parse_command",
    "render_api_info",
    "render_id_listing",
    "serialize_command",
    "validate_catalog",
    "validate_command",
]
