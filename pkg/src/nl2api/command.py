"""The JSON search command: parse, validate, serialize, compare.

A command names one API, binds scalar values to its input arguments and
lists the output arguments the user wants back:

    {"api_id":"FIN001","inputs":{"company_name":"Company XXX","year":2020},"info":["net_profit"]}

parse_command is tolerant (it extracts the first balanced JSON object from
raw model output); validate_command then re-imposes strictness against the
ApiSpec. Violation codes are part of the public surface, see report.py.
"""

from __future__ import annotations

import datetime
import json
import re
from dataclasses import dataclass, field

from .catalog import ApiSpec, ArgSpec
from .errors import JsonSyntaxError, NoJsonObjectFound, SchemaError
from .report import ValidationReport, Violation, ViolationCode

Scalar = str | int | float | bool

_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")
_COMMAND_FIELDS = ("api_id", "inputs", "info")


@dataclass(frozen=True)
class ApiCommand:
    api_id: str
    inputs: dict[str, Scalar] = field(default_factory=dict)
    info: tuple[str, ...] = ()

    def to_obj(self) -> dict:
        return {
            "api_id": self.api_id,
            "inputs": {k: self.inputs[k] for k in sorted(self.inputs)},
            "info": list(self.info),
        }


# --- extraction / parsing ----------------------------------------------------

def extract_json_object(raw: str) -> tuple[str, int]:
    """Return (span, start offset) of the first balanced {...} in raw.

    Tracks string literals and escapes so braces inside strings don't count.
    """
    start = raw.find("{")
    if start < 0:
        raise NoJsonObjectFound("no JSON object in backend output")
    depth = 0
    in_string = False
    escaped = False
    for i in range(start, len(raw)):
        ch = raw[i]
        if in_string:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_string = False
            continue
        if ch == '"':
            in_string = True
        elif ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                return raw[start : i + 1], start
    raise JsonSyntaxError("unbalanced JSON object", len(raw))


def command_from_obj(obj) -> ApiCommand:
    """Build an ApiCommand from a decoded JSON object, checking its shape."""
    if not isinstance(obj, dict):
        raise SchemaError("command must be a JSON object")
    for name in _COMMAND_FIELDS:
        if name not in obj:
            raise SchemaError(f"missing field {name!r}")
    for name in obj:
        if name not in _COMMAND_FIELDS:
            raise SchemaError(f"unexpected field {name!r}")
    api_id = obj["api_id"]
    if not isinstance(api_id, str):
        raise SchemaError("api_id must be a string")
    inputs = obj["inputs"]
    if not isinstance(inputs, dict):
        raise SchemaError("inputs must be an object")
    for key, value in inputs.items():
        if not isinstance(key, str):
            raise SchemaError("input keys must be strings")
        if value is None or isinstance(value, (list, dict)):
            raise SchemaError(f"input {key!r} must be a scalar value")
    info = obj["info"]
    if not isinstance(info, list) or not all(isinstance(x, str) for x in info):
        raise SchemaError("info must be a list of strings")
    return ApiCommand(api_id=api_id, inputs=dict(inputs), info=tuple(info))


def parse_command(raw: str) -> ApiCommand:
    """Extract and decode the first JSON command object in raw text.

    Surrounding prose is ignored. Raises NoJsonObjectFound, JsonSyntaxError
    or SchemaError; missing *argument values* are a validation concern, not
    a parse error.
    """
    span, start = extract_json_object(raw)
    try:
        obj = json.loads(span)
    except json.JSONDecodeError as exc:
        raise JsonSyntaxError(exc.msg, start + exc.pos) from exc
    return command_from_obj(obj)


# --- serialization -------------------------------------------------------------

def serialize_command(cmd: ApiCommand) -> str:
    """Canonical wire form: api_id, inputs (keys sorted), info; no extra whitespace."""
    return json.dumps(cmd.to_obj(), ensure_ascii=False, separators=(",", ":"))


# --- validation ------------------------------------------------------------------

def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def value_matches_type(value: Scalar, arg: ArgSpec) -> bool:
    t = arg.value_type
    if t == "text":
        return isinstance(value, str)
    if t == "integer":
        return _is_number(value) and float(value).is_integer()
    if t == "decimal":
        return _is_number(value)
    if t == "date":
        if not isinstance(value, str) or not _DATE_RE.match(value):
            return False
        try:
            datetime.date.fromisoformat(value)
        except ValueError:
            return False
        return True
    if t == "enum":
        return isinstance(value, str) and value in (arg.enum_values or ())
    return False


def validate_command(cmd: ApiCommand, spec: ApiSpec) -> ValidationReport:
    """Check a parsed command against an ApiSpec; findings are report entries.

    An api_id mismatch is itself a violation, so the command may name a
    different API than the spec it is checked against.
    """
    out: list[Violation] = []
    if cmd.api_id != spec.api_id:
        out.append(
            Violation(
                ViolationCode.ID_MISMATCH,
                "api_id",
                f"command api_id {cmd.api_id!r} does not match spec {spec.api_id!r}",
            )
        )
    declared = {a.name: a for a in spec.inputs}
    for arg in spec.inputs:
        if arg.required and arg.name not in cmd.inputs:
            out.append(
                Violation(
                    ViolationCode.MISSING_INPUT,
                    f"inputs.{arg.name}",
                    f"required input {arg.name!r} is missing",
                )
            )
    for key, value in cmd.inputs.items():
        arg = declared.get(key)
        if arg is None:
            out.append(
                Violation(
                    ViolationCode.UNKNOWN_INPUT,
                    f"inputs.{key}",
                    f"input {key!r} is not declared by {spec.api_id}",
                )
            )
        elif not value_matches_type(value, arg):
            out.append(
                Violation(
                    ViolationCode.TYPE_MISMATCH,
                    f"inputs.{key}",
                    f"input {key!r} value {value!r} is not a valid {arg.value_type}",
                )
            )
    if not cmd.info:
        out.append(Violation(ViolationCode.EMPTY_INFO, "info", "info list is empty"))
    outputs = set(spec.output_names)
    seen: set[str] = set()
    for i, name in enumerate(cmd.info):
        if name in seen:
            out.append(
                Violation(ViolationCode.DUP_INFO, f"info[{i}]", f"duplicate info entry {name!r}")
            )
        seen.add(name)
        if name not in outputs:
            out.append(
                Violation(
                    ViolationCode.UNKNOWN_OUTPUT,
                    f"info[{i}]",
                    f"output {name!r} is not declared by {spec.api_id}",
                )
            )
    return ValidationReport(tuple(out))


# --- equality ----------------------------------------------------------------------

def _values_equal(a: Scalar, b: Scalar) -> bool:
    if _is_number(a) and _is_number(b):
        return float(a) == float(b)
    if type(a) is not type(b):
        return False
    return a == b


def commands_equal(a: ApiCommand, b: ApiCommand) -> bool:
    """Content equality: same api_id, same inputs (numerics compared by value
    across integer/decimal representations), info compared as sets."""
    if a.api_id != b.api_id:
        return False
    if a.inputs.keys() != b.inputs.keys():
        return False
    for key in a.inputs:
        if not _values_equal(a.inputs[key], b.inputs[key]):
            return False
    return set(a.info) == set(b.info)
