"""Instruction-data factory: synthesize, filter, inject negatives, augment
aliases, and emit the two per-task fine-tuning datasets.

Dataset files are UTF-8 line-delimited JSON, one
{"instruction": ..., "input": ..., "output": ...} object per line. The seed
file is plain text with one seed question per line; the alias file is a
two-column CSV `alias,canonical`.

Everything downstream of generation is a pure, order-preserving pass, and
generation itself is seeded, so a fixed seed reproduces the output files
byte for byte.
"""

from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass, field
from pathlib import Path

from .catalog import ApiCatalog, ApiSpec
from .command import ApiCommand, command_from_obj, serialize_command, validate_command
from .errors import (
    CommandParseError,
    FileUnwritable,
    NegativeRecordInStage2,
    NoNegativeTemplates,
    UnknownApiId,
)
from .report import ValidationReport, Violation, ViolationCode
from .router.backends import BackendHandle, GenerationParams
from .router.pipeline import build_stage1_prompt, build_stage2_prompt
from .router.templates import (
    STYLE_GENERATION_DETAILED,
    SYNTH_DETAILED,
    UNRESOLVABLE,
    PromptTemplate,
)

logger = logging.getLogger(__name__)

ORIGIN_GENERATED = "generated"
ORIGIN_SEED = "seed"
ORIGIN_AUGMENTED = "augmented"
ORIGIN_NEGATIVE = "negative"

DEFAULT_NEGATIVE_TEMPLATES = (
    "Tell me some information",
    "Give me the latest updates",
    "I need to look something up",
    "What do you have",
    "Can you share some insights",
    "Show me the important stuff",
)

# the 10k negatives on top of 30k positives reported for the routing task
DEFAULT_NEGATIVE_RATIO = 0.25


@dataclass(frozen=True)
class RawRecord:
    query: str
    command: ApiCommand | None
    origin: str = ORIGIN_GENERATED
    notes: str = ""

    @property
    def is_negative(self) -> bool:
        return self.command is None

    def to_obj(self) -> dict:
        return {
            "query": self.query,
            "command": self.command.to_obj() if self.command else None,
            "origin": self.origin,
            "notes": self.notes,
        }


@dataclass(frozen=True)
class InstructionExample:
    instruction: str
    input: str
    output: str

    def to_obj(self) -> dict:
        return {"instruction": self.instruction, "input": self.input, "output": self.output}

    @classmethod
    def from_obj(cls, obj: dict) -> "InstructionExample":
        return cls(obj["instruction"], obj["input"], obj["output"])


@dataclass(frozen=True)
class AliasMap:
    entries: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for alias, canonical in self.entries.items():
            if alias == canonical:
                raise ValueError(f"alias {alias!r} maps to itself")

    def __len__(self) -> int:
        return len(self.entries)

    def items_sorted(self) -> list[tuple[str, str]]:
        return sorted(self.entries.items())


def load_alias_map(path: str | Path) -> AliasMap:
    import csv

    entries: dict[str, str] = {}
    with Path(path).open(encoding="utf-8", newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].startswith("#"):
                continue
            if len(row) != 2:
                raise ValueError(f"alias file rows must be alias,canonical: {row!r}")
            entries[row[0].strip()] = row[1].strip()
    return AliasMap(entries)


def load_seeds(path: str | Path) -> list[str]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return [line.strip() for line in lines if line.strip()]


# --- generation ------------------------------------------------------------------

def assemble_generation_prompt(
    spec: ApiSpec,
    seeds: list[str],
    icl: list[RawRecord],
    template: PromptTemplate = SYNTH_DETAILED,
    n: int | None = None,
) -> str:
    """Synthesis prompt: role setup, full API description, value-domain notes,
    seed questions and serialized worked examples."""
    if template.style != STYLE_GENERATION_DETAILED:
        raise ValueError("data generation requires a generation_detailed template")
    template.require("api_info", "seed_questions")
    from .catalog import render_api_info_spec

    seed_block = "".join(f"- {s}\n" for s in seeds) if seeds else "(none)\n"
    icl_lines = []
    for record in icl:
        if record.command is None:
            continue
        icl_lines.append(
            json.dumps(
                {"query": record.query, "command": record.command.to_obj()},
                ensure_ascii=False,
            )
        )
    icl_block = ""
    if icl_lines:
        icl_block = "Worked examples:\n" + "".join(line + "\n" for line in icl_lines)
    prompt = template.render(
        api_info=render_api_info_spec(spec),
        seed_questions=seed_block,
        icl_examples=icl_block,
    )
    if n is not None:
        prompt += f"Generate exactly {n} records.\n"
    return prompt


def generate_raw(
    backend: BackendHandle,
    prompt: str,
    n: int,
    params: GenerationParams,
) -> list[RawRecord]:
    """Parse up to n line-delimited {"query", "command"} records out of the
    backend output; unparseable lines are dropped and counted."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    raw = backend.complete(prompt, params)
    records: list[RawRecord] = []
    dropped = 0
    for line in raw.splitlines():
        if len(records) >= n:
            break
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
            query = obj["query"]
            if not isinstance(query, str) or not query.strip():
                raise ValueError("empty query")
            command = command_from_obj(obj["command"])
        except (ValueError, KeyError, TypeError, CommandParseError):
            dropped += 1
            continue
        records.append(RawRecord(query=query, command=command, origin=ORIGIN_GENERATED))
    if dropped:
        logger.warning("generate_raw: dropped %d unparseable line(s)", dropped)
    return records


# --- filtering --------------------------------------------------------------------

@dataclass(frozen=True)
class FilterResult:
    accepted: list[RawRecord]
    rejected: list[tuple[RawRecord, ValidationReport]]


def program_filter(records: list[RawRecord], catalog: ApiCatalog) -> FilterResult:
    """Accept records whose command validates cleanly against its API and
    whose query is non-empty; everything else lands in `rejected` with the
    full report. accepted + rejected partition the input."""
    accepted: list[RawRecord] = []
    rejected: list[tuple[RawRecord, ValidationReport]] = []
    for record in records:
        violations = []
        if not record.query.strip():
            violations.append(
                Violation(ViolationCode.EMPTY_QUERY, "query", "query text is empty")
            )
        if record.command is None:
            violations.append(
                Violation(ViolationCode.SCHEMA, "command", "record has no command")
            )
            rejected.append((record, ValidationReport(tuple(violations))))
            continue
        try:
            spec = catalog.get(record.command.api_id)
        except UnknownApiId:
            violations.append(
                Violation(
                    ViolationCode.UNKNOWN_API,
                    "command.api_id",
                    f"api_id {record.command.api_id!r} is not in the catalog",
                )
            )
            rejected.append((record, ValidationReport(tuple(violations))))
            continue
        report = validate_command(record.command, spec)
        violations.extend(report.violations)
        if violations:
            rejected.append((record, ValidationReport(tuple(violations))))
        else:
            accepted.append(record)
    return FilterResult(accepted=accepted, rejected=rejected)


# --- negatives and aliases -----------------------------------------------------------

def inject_negatives(
    records: list[RawRecord],
    ratio: float,
    templates=DEFAULT_NEGATIVE_TEMPLATES,
    seed: int = 0,
) -> list[RawRecord]:
    """Append vague-query negatives so negatives/total lands within one item
    of ratio. Round-robin over templates from a seeded starting offset."""
    if not 0 <= ratio < 1:
        raise ValueError(f"ratio must be in [0, 1), got {ratio}")
    if ratio == 0:
        return list(records)
    if not templates:
        raise NoNegativeTemplates("negative injection needs at least one template")
    n_pos = len(records)
    n_neg = round(ratio * n_pos / (1.0 - ratio))
    rng = random.Random(seed)
    start = rng.randrange(len(templates))
    out = list(records)
    for i in range(n_neg):
        out.append(
            RawRecord(
                query=templates[(start + i) % len(templates)],
                command=None,
                origin=ORIGIN_NEGATIVE,
            )
        )
    return out


def augment_aliases(records: list[RawRecord], aliases: AliasMap) -> list[RawRecord]:
    """One extra record per (record, alias) whose canonical name occurs in
    the query: the query gets the alias, the command keeps the canonical
    name (the normalization target). Negatives pass through untouched."""
    out: list[RawRecord] = []
    for record in records:
        out.append(record)
        if record.is_negative:
            continue
        for alias, canonical in aliases.items_sorted():
            if canonical and canonical in record.query:
                out.append(
                    RawRecord(
                        query=record.query.replace(canonical, alias),
                        command=record.command,
                        origin=ORIGIN_AUGMENTED,
                        notes=f"alias of {canonical!r}",
                    )
                )
    return out


# --- emission ----------------------------------------------------------------------

def emit_stage1_dataset(
    records: list[RawRecord],
    catalog: ApiCatalog,
    template: PromptTemplate,
    include_descriptions: bool = False,
) -> list[InstructionExample]:
    """Routing-task examples: the instruction embeds the id listing, the
    input is the bare query, the output is the api_id or the negative token."""
    instruction = build_stage1_prompt(
        catalog, "", template, include_descriptions=include_descriptions
    )
    out = []
    for record in records:
        label = UNRESOLVABLE if record.is_negative else record.command.api_id
        out.append(InstructionExample(instruction=instruction, input=record.query, output=label))
    return out


def emit_stage2_dataset(
    records: list[RawRecord],
    catalog: ApiCatalog,
    template: PromptTemplate,
) -> list[InstructionExample]:
    """Command-task examples: the instruction embeds the record's API info,
    the output is the canonical command JSON. Negatives are a caller error."""
    out = []
    for record in records:
        if record.is_negative:
            raise NegativeRecordInStage2(
                f"negative query {record.query!r} has no place in the command dataset"
            )
        spec = catalog.get(record.command.api_id)
        instruction = build_stage2_prompt(spec, "", template)
        out.append(
            InstructionExample(
                instruction=instruction,
                input=record.query,
                output=serialize_command(record.command),
            )
        )
    return out


# --- files ------------------------------------------------------------------------

def write_dataset(examples: list[InstructionExample], path: str | Path) -> int:
    try:
        with Path(path).open("w", encoding="utf-8") as fh:
            for ex in examples:
                fh.write(json.dumps(ex.to_obj(), ensure_ascii=False) + "\n")
    except OSError as exc:
        raise FileUnwritable(f"cannot write dataset {path}: {exc}") from exc
    return len(examples)


def read_dataset(path: str | Path) -> list[InstructionExample]:
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            out.append(InstructionExample.from_obj(json.loads(line)))
    return out


def export_review_queue(
    rejected: list[tuple[RawRecord, ValidationReport]], path: str | Path
) -> int:
    """Write rejected records with their reports for human triage; returns
    the number of lines written."""
    try:
        with Path(path).open("w", encoding="utf-8") as fh:
            for record, report in rejected:
                obj = record.to_obj()
                obj["violations"] = report.to_obj()
                fh.write(json.dumps(obj, ensure_ascii=False) + "\n")
    except OSError as exc:
        raise FileUnwritable(f"cannot write review queue {path}: {exc}") from exc
    return len(rejected)


def load_review_queue(path: str | Path) -> list[tuple[RawRecord, ValidationReport]]:
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        obj = json.loads(line)
        command = command_from_obj(obj["command"]) if obj.get("command") else None
        record = RawRecord(
            query=obj["query"],
            command=command,
            origin=obj.get("origin", ORIGIN_GENERATED),
            notes=obj.get("notes", ""),
        )
        out.append((record, ValidationReport.from_obj(obj["violations"])))
    return out


# --- full pipeline -------------------------------------------------------------------

@dataclass
class DatagenResult:
    raw_count: int
    accepted: list[RawRecord]
    rejected: list[tuple[RawRecord, ValidationReport]]
    records: list[RawRecord]
    stage1: list[InstructionExample]
    stage2: list[InstructionExample]


def run_datagen(
    backend: BackendHandle,
    catalog: ApiCatalog,
    seeds: list[str],
    aliases: AliasMap,
    stage1_template: PromptTemplate,
    stage2_template: PromptTemplate,
    n_per_api: int = 8,
    negative_ratio: float = DEFAULT_NEGATIVE_RATIO,
    negative_templates=DEFAULT_NEGATIVE_TEMPLATES,
    seed: int = 0,
    icl_per_prompt: int = 2,
) -> DatagenResult:
    """generate -> filter -> inject negatives -> augment aliases -> emit."""
    params = GenerationParams(seed=seed)
    raw: list[RawRecord] = []
    icl: list[RawRecord] = []
    for spec in catalog.apis:
        prompt = assemble_generation_prompt(spec, seeds, icl[:icl_per_prompt], n=n_per_api)
        batch = generate_raw(backend, prompt, n_per_api, params)
        raw.extend(batch)
        if not icl and batch:
            icl = batch[:icl_per_prompt]
    filtered = program_filter(raw, catalog)
    with_negatives = inject_negatives(
        filtered.accepted, negative_ratio, negative_templates, seed=seed
    )
    records = augment_aliases(with_negatives, aliases)
    positives = [r for r in records if not r.is_negative]
    return DatagenResult(
        raw_count=len(raw),
        accepted=filtered.accepted,
        rejected=filtered.rejected,
        records=records,
        stage1=emit_stage1_dataset(records, catalog, stage1_template),
        stage2=emit_stage2_dataset(positives, catalog, stage2_template),
    )
