"""The API registry: load, validate and render the per-API metadata.

The registry is a single UTF-8 JSON document:

    {
      "version": "1",
      "apis": [
        {
          "api_id": "FIN001",
          "display_name": "key domestic indicators",
          "description": "...",
          "aliases": ["..."],
          "inputs":  [{"name": "...", "type": "text", "required": true,
                       "meaning": "...", "enum_values": ["..."]?, "unit": "..."?}],
          "outputs": [{"name": "...", "type": "decimal", "meaning": "...", "unit": "..."?}]
        },
        ...
      ]
    }

Catalogs are immutable after load and safe to share across request handlers;
reloading produces a fresh value the service layer swaps in atomically.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (
    CatalogInvariantViolation,
    FileUnreadable,
    MalformedCatalog,
    UnknownApiId,
)
from .report import ValidationReport, Violation, ViolationCode

VALUE_TYPES = ("text", "integer", "decimal", "date", "enum")
API_ID_RE = re.compile(r"^[A-Za-z0-9_-]{1,64}$")


@dataclass(frozen=True)
class ArgSpec:
    name: str
    value_type: str
    meaning: str = ""
    required: bool = False
    enum_values: tuple[str, ...] | None = None
    unit: str | None = None


@dataclass(frozen=True)
class ApiSpec:
    api_id: str
    display_name: str
    description: str = ""
    inputs: tuple[ArgSpec, ...] = ()
    outputs: tuple[ArgSpec, ...] = ()
    aliases: tuple[str, ...] = ()

    @property
    def input_names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.inputs)

    @property
    def output_names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.outputs)

    @property
    def required_inputs(self) -> tuple[ArgSpec, ...]:
        return tuple(a for a in self.inputs if a.required)

    def get_input(self, name: str) -> ArgSpec | None:
        for a in self.inputs:
            if a.name == name:
                return a
        return None

    def get_output(self, name: str) -> ArgSpec | None:
        for a in self.outputs:
            if a.name == name:
                return a
        return None

    def column_names(self) -> tuple[str, ...]:
        """Inputs then outputs, deduplicated, declaration order."""
        seen: dict[str, None] = {}
        for a in (*self.inputs, *self.outputs):
            seen.setdefault(a.name, None)
        return tuple(seen)


@dataclass(frozen=True)
class ApiCatalog:
    apis: tuple[ApiSpec, ...]
    version: str = ""
    source_path: str = ""
    _by_id: dict[str, ApiSpec] = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "_by_id", {a.api_id: a for a in self.apis})

    def __len__(self) -> int:
        return len(self.apis)

    def __iter__(self):
        return iter(self.apis)

    def __contains__(self, api_id: str) -> bool:
        return api_id in self._by_id

    def ids(self) -> tuple[str, ...]:
        return tuple(a.api_id for a in self.apis)

    def get(self, api_id: str) -> ApiSpec:
        try:
            return self._by_id[api_id]
        except KeyError:
            raise UnknownApiId(f"no API with id {api_id!r}") from None


# --- loading -----------------------------------------------------------------

def _arg_from_obj(obj, where: str, *, output: bool) -> ArgSpec:
    if not isinstance(obj, dict):
        raise MalformedCatalog(f"{where}: argument entry must be an object")
    try:
        name = obj["name"]
        value_type = obj["type"]
    except KeyError as exc:
        raise MalformedCatalog(f"{where}: missing argument field {exc}") from None
    if not isinstance(name, str) or not isinstance(value_type, str):
        raise MalformedCatalog(f"{where}: argument name/type must be strings")
    enum_values = obj.get("enum_values")
    if enum_values is not None:
        if not isinstance(enum_values, list) or not all(isinstance(v, str) for v in enum_values):
            raise MalformedCatalog(f"{where}: enum_values must be a list of strings")
        enum_values = tuple(enum_values)
    required = bool(obj.get("required", False)) and not output
    return ArgSpec(
        name=name,
        value_type=value_type,
        meaning=str(obj.get("meaning", "")),
        required=required,
        enum_values=enum_values,
        unit=obj.get("unit"),
    )


def _api_from_obj(obj, index: int) -> ApiSpec:
    where = f"apis[{index}]"
    if not isinstance(obj, dict):
        raise MalformedCatalog(f"{where}: API entry must be an object")
    for key in ("api_id", "display_name"):
        if not isinstance(obj.get(key), str):
            raise MalformedCatalog(f"{where}: missing or non-string field {key!r}")
    aliases = obj.get("aliases", [])
    if not isinstance(aliases, list) or not all(isinstance(a, str) for a in aliases):
        raise MalformedCatalog(f"{where}: aliases must be a list of strings")
    inputs = obj.get("inputs", [])
    outputs = obj.get("outputs", [])
    if not isinstance(inputs, list) or not isinstance(outputs, list):
        raise MalformedCatalog(f"{where}: inputs/outputs must be lists")
    return ApiSpec(
        api_id=obj["api_id"],
        display_name=obj["display_name"],
        description=str(obj.get("description", "")),
        inputs=tuple(
            _arg_from_obj(a, f"{where}.inputs[{i}]", output=False) for i, a in enumerate(inputs)
        ),
        outputs=tuple(
            _arg_from_obj(a, f"{where}.outputs[{i}]", output=True) for i, a in enumerate(outputs)
        ),
        aliases=tuple(aliases),
    )


def catalog_from_obj(obj, source_path: str = "") -> ApiCatalog:
    if not isinstance(obj, dict):
        raise MalformedCatalog("top level must be a JSON object")
    apis = obj.get("apis")
    if not isinstance(apis, list):
        raise MalformedCatalog("missing or non-list field 'apis'")
    return ApiCatalog(
        apis=tuple(_api_from_obj(a, i) for i, a in enumerate(apis)),
        version=str(obj.get("version", "")),
        source_path=source_path,
    )


def load_catalog(path: str | Path) -> ApiCatalog:
    """Load and fully validate a catalog file.

    Declaration order is preserved. Raises FileUnreadable, MalformedCatalog
    or CatalogInvariantViolation; a returned catalog always passes
    validate_catalog with zero violations.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FileUnreadable(f"cannot read catalog file {path}: {exc}") from exc
    if not text.strip():
        raise MalformedCatalog(f"catalog file {path} is empty")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedCatalog(f"catalog file {path} is not valid JSON: {exc}") from exc
    catalog = catalog_from_obj(obj, source_path=str(path))
    report = validate_catalog(catalog)
    if not report.empty:
        raise CatalogInvariantViolation(report)
    return catalog


# --- validation ----------------------------------------------------------------

def _validate_args(args: tuple[ArgSpec, ...], path: str, out: list[Violation]) -> None:
    seen: set[str] = set()
    for i, arg in enumerate(args):
        where = f"{path}[{i}]"
        if not arg.name:
            out.append(Violation(ViolationCode.EMPTY_ARG_NAME, where, f"{where}: empty argument name"))
        elif arg.name in seen:
            out.append(
                Violation(ViolationCode.DUP_ARG, where, f"{where}: duplicate argument name {arg.name!r}")
            )
        seen.add(arg.name)
        if arg.value_type not in VALUE_TYPES:
            out.append(
                Violation(
                    ViolationCode.BAD_VALUE_TYPE,
                    where,
                    f"{where}: unknown value type {arg.value_type!r}",
                )
            )
        if arg.value_type == "enum":
            if not arg.enum_values:
                out.append(
                    Violation(ViolationCode.ENUM_EMPTY, where, f"{where}: enum argument without values")
                )
        elif arg.enum_values is not None:
            out.append(
                Violation(
                    ViolationCode.ENUM_UNEXPECTED,
                    where,
                    f"{where}: enum_values given for non-enum type {arg.value_type!r}",
                )
            )


def validate_catalog(catalog: ApiCatalog) -> ValidationReport:
    """Check every catalog invariant; violations are data, not faults."""
    out: list[Violation] = []
    if not catalog.apis:
        out.append(Violation(ViolationCode.EMPTY_CATALOG, "apis", "catalog declares no APIs"))
    seen_ids: set[str] = set()
    for i, api in enumerate(catalog.apis):
        where = f"apis[{i}]"
        if not API_ID_RE.match(api.api_id):
            out.append(
                Violation(ViolationCode.BAD_API_ID, where, f"{where}: invalid api_id {api.api_id!r}")
            )
        if api.api_id in seen_ids:
            out.append(
                Violation(ViolationCode.DUP_API_ID, where, f"{where}: duplicate api_id {api.api_id!r}")
            )
        seen_ids.add(api.api_id)
        _validate_args(api.inputs, f"{where}.inputs", out)
        _validate_args(api.outputs, f"{where}.outputs", out)
    return ValidationReport(tuple(out))


# --- rendering -----------------------------------------------------------------

def render_id_listing(catalog: ApiCatalog, include_descriptions: bool = False) -> str:
    """One newline-terminated `api_id<TAB>display_name` line per API, in order."""
    lines = []
    for api in catalog.apis:
        line = f"{api.api_id}\t{api.display_name}"
        if include_descriptions and api.description:
            line += f"\t{api.description}"
        lines.append(line + "\n")
    return "".join(lines)


def _render_arg(arg: ArgSpec, *, show_required: bool) -> str:
    qualifiers = [arg.value_type]
    if show_required:
        qualifiers.append("required" if arg.required else "optional")
    if arg.enum_values:
        qualifiers.append("one of: " + ", ".join(arg.enum_values))
    line = f"  - {arg.name} ({'; '.join(qualifiers)})"
    if arg.meaning:
        line += f": {arg.meaning}"
    if arg.unit:
        line += f" [{arg.unit}]"
    return line


def render_api_info_spec(spec: ApiSpec) -> str:
    """Deterministic info block: id, name, description and every argument."""
    lines = [f"API-ID: {spec.api_id}", f"Name: {spec.display_name}"]
    if spec.description:
        lines.append(f"Description: {spec.description}")
    if spec.aliases:
        lines.append("Also known as: " + ", ".join(spec.aliases))
    lines.append("Input arguments:")
    if spec.inputs:
        lines.extend(_render_arg(a, show_required=True) for a in spec.inputs)
    else:
        lines.append("  (none)")
    lines.append("Output arguments:")
    if spec.outputs:
        lines.extend(_render_arg(a, show_required=False) for a in spec.outputs)
    else:
        lines.append("  (none)")
    return "\n".join(lines) + "\n"


def render_api_info(catalog: ApiCatalog, api_id: str) -> str:
    return render_api_info_spec(catalog.get(api_id))


# --- serialization back to the file schema ---------------------------------------

def arg_to_obj(arg: ArgSpec, *, output: bool) -> dict:
    obj: dict = {"name": arg.name, "type": arg.value_type}
    if not output:
        obj["required"] = arg.required
    obj["meaning"] = arg.meaning
    if arg.enum_values is not None:
        obj["enum_values"] = list(arg.enum_values)
    if arg.unit is not None:
        obj["unit"] = arg.unit
    return obj


def api_to_obj(api: ApiSpec) -> dict:
    return {
        "api_id": api.api_id,
        "display_name": api.display_name,
        "description": api.description,
        "aliases": list(api.aliases),
        "inputs": [arg_to_obj(a, output=False) for a in api.inputs],
        "outputs": [arg_to_obj(a, output=True) for a in api.outputs],
    }


def catalog_to_obj(catalog: ApiCatalog) -> dict:
    return {"version": catalog.version, "apis": [api_to_obj(a) for a in catalog.apis]}


def write_catalog(catalog: ApiCatalog, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(catalog_to_obj(catalog), ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8",
    )
