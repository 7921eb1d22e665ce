"""Desk-scale structured store: one typed table per API, exact-match retrieval.

Fixtures are one UTF-8 CSV per API named `<api_id>.csv`, header row = column
names; the column set must equal the API's declared inputs plus outputs.
Dates are `YYYY-MM-DD`, decimals use `.` with no thousands separators.

Lookups are linear scans: tens of tables with desk-scale row counts need no
indexing, and keeping the executor a transparent filter-and-project makes it
trivially auditable against the brute-force oracle.
"""

from __future__ import annotations

import csv
import unicodedata
from dataclasses import dataclass
from pathlib import Path

from .catalog import ApiCatalog, ApiSpec, ArgSpec
from .command import ApiCommand, validate_command
from .errors import (
    CellTypeError,
    ColumnMismatch,
    PreconditionViolated,
    UnknownApiId,
    UnknownColumn,
    UnknownTableApiId,
)


@dataclass(frozen=True)
class Column:
    name: str
    value_type: str


@dataclass(frozen=True)
class Table:
    columns: tuple[Column, ...]
    rows: tuple[tuple, ...]

    def column_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)


@dataclass(frozen=True)
class ResultTable:
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]

    def to_obj(self) -> dict:
        return {"columns": list(self.columns), "rows": [list(r) for r in self.rows]}


@dataclass(frozen=True)
class Store:
    tables: dict[str, Table]
    catalog_version: str = ""

    def text_values(self) -> set[str]:
        """Every distinct text-column value across all tables (the entity
        lexicon the rule backend matches company names against)."""
        values: set[str] = set()
        for table in self.tables.values():
            text_cols = [i for i, c in enumerate(table.columns) if c.value_type == "text"]
            for row in table.rows:
                for i in text_cols:
                    if row[i]:
                        values.add(row[i])
        return values


def _parse_cell(raw: str, arg: ArgSpec, row: int, col: str):
    t = arg.value_type
    if t == "integer":
        try:
            return int(raw)
        except ValueError:
            raise CellTypeError(f"{raw!r} is not an integer", row, col) from None
    if t == "decimal":
        try:
            return float(raw)
        except ValueError:
            raise CellTypeError(f"{raw!r} is not a decimal", row, col) from None
    if t == "date":
        import datetime

        try:
            datetime.date.fromisoformat(raw)
        except ValueError:
            raise CellTypeError(f"{raw!r} is not an ISO date", row, col) from None
        if len(raw) != 10:
            raise CellTypeError(f"{raw!r} is not in YYYY-MM-DD form", row, col)
        return raw
    if t == "enum":
        if raw not in (arg.enum_values or ()):
            raise CellTypeError(f"{raw!r} is not in the enum domain", row, col)
        return raw
    return raw  # text


def _load_table(path: Path, spec: ApiSpec) -> Table:
    declared: dict[str, ArgSpec] = {}
    for arg in (*spec.inputs, *spec.outputs):
        declared.setdefault(arg.name, arg)
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ColumnMismatch(f"{path.name}: missing header row") from None
        if set(header) != set(declared):
            missing = sorted(set(declared) - set(header))
            extra = sorted(set(header) - set(declared))
            raise ColumnMismatch(
                f"{path.name}: columns do not match {spec.api_id} "
                f"(missing {missing}, unexpected {extra})"
            )
        if len(set(header)) != len(header):
            raise ColumnMismatch(f"{path.name}: duplicate column in header")
        columns = tuple(Column(name, declared[name].value_type) for name in header)
        rows = []
        for row_no, raw_row in enumerate(reader, start=2):
            if not raw_row:
                continue
            if len(raw_row) != len(header):
                raise ColumnMismatch(
                    f"{path.name}: row {row_no} has {len(raw_row)} cells, expected {len(header)}"
                )
            rows.append(
                tuple(
                    _parse_cell(cell, declared[name], row_no, name)
                    for cell, name in zip(raw_row, header)
                )
            )
    return Table(columns=columns, rows=tuple(rows))


def load_store(path: str | Path, catalog: ApiCatalog) -> Store:
    """Load every `<api_id>.csv` under path; conformance enforced at load.

    An empty directory is a valid (empty) store; executing against it then
    fails per-call with UnknownApiId.
    """
    path = Path(path)
    tables: dict[str, Table] = {}
    for csv_path in sorted(path.glob("*.csv")):
        api_id = csv_path.stem
        if api_id not in catalog:
            raise UnknownTableApiId(f"{csv_path.name}: no API {api_id!r} in the catalog")
        tables[api_id] = _load_table(csv_path, catalog.get(api_id))
    return Store(tables=tables, catalog_version=catalog.version)


# --- retrieval -----------------------------------------------------------------

def _nfc(s: str) -> str:
    return unicodedata.normalize("NFC", s)


def _cell_matches(cell, wanted) -> bool:
    if isinstance(cell, str) and isinstance(wanted, str):
        return _nfc(cell) == _nfc(wanted)
    if isinstance(cell, (int, float)) and isinstance(wanted, (int, float)):
        return float(cell) == float(wanted)
    return cell == wanted


def project(table: Table, names) -> ResultTable:
    """Column subset in the given order; row count preserved."""
    positions = []
    available = table.column_names()
    for name in names:
        try:
            positions.append(available.index(name))
        except ValueError:
            raise UnknownColumn(f"no column {name!r}") from None
    return ResultTable(
        columns=tuple(names),
        rows=tuple(tuple(row[i] for i in positions) for row in table.rows),
    )


def execute(store: Store, cmd: ApiCommand, spec: ApiSpec) -> ResultTable:
    """Exact-match filter on every command input, projected onto cmd.info.

    The command must already validate cleanly against spec; zero matching
    rows is a normal result, not an error.
    """
    report = validate_command(cmd, spec)
    if not report.empty:
        raise PreconditionViolated(
            "command must validate before execution: " + "; ".join(report.messages())
        )
    table = store.tables.get(cmd.api_id)
    if table is None:
        raise UnknownApiId(f"store has no table for {cmd.api_id!r}")
    names = table.column_names()
    col_of = {name: i for i, name in enumerate(names)}
    matching = [
        row
        for row in table.rows
        if all(_cell_matches(row[col_of[k]], v) for k, v in cmd.inputs.items())
    ]
    filtered = Table(columns=table.columns, rows=tuple(matching))
    return project(filtered, list(cmd.info))
