"""The two-stage pipeline: route the query to an API, generate its command.

Stage 1 asks the backend for an api_id (or the negative token) against the
catalog listing; stage 2 asks for the JSON command against the resolved
API's full argument description, then parses and validates the output. Any
violation is fed back to the backend and retried up to params.retries times
before CommandInvalid is raised. answer() composes the stages with store
execution, records a trace entry per step, and returns a kind-tagged
outcome instead of raising.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field

from ..catalog import ApiCatalog, ApiSpec, render_api_info_spec, render_id_listing
from ..command import ApiCommand, parse_command, validate_command
from ..errors import (
    BackendUnreachable,
    CommandInvalid,
    CommandParseError,
    Nl2ApiError,
    UnrecognizedBackendOutput,
)
from ..report import ValidationReport, Violation, ViolationCode
from ..store import ResultTable, Store, execute
from .backends import BackendHandle, GenerationParams
from .templates import (
    STYLE_FINETUNE_SIMPLE,
    UNRESOLVABLE,
    PromptTemplate,
    default_template,
    format_error_feedback,
)

DEFAULT_CLARIFICATION = (
    "Please provide specific details for the information (company name, type of "
    "information, etc.) you want to inquire about."
)

RESOLVED = "resolved"
CLARIFICATION_NEEDED = "clarification_needed"

ANSWERED = "answered"
CLARIFY = "clarify"
FAILED = "failed"


@dataclass(frozen=True)
class RoutingOutcome:
    kind: str
    api_id: str | None = None
    clarification: str | None = None

    @classmethod
    def resolved(cls, api_id: str) -> "RoutingOutcome":
        return cls(kind=RESOLVED, api_id=api_id)

    @classmethod
    def needs_clarification(cls, text: str) -> "RoutingOutcome":
        return cls(kind=CLARIFICATION_NEEDED, clarification=text)

    @property
    def is_resolved(self) -> bool:
        return self.kind == RESOLVED

    def to_obj(self) -> dict:
        obj: dict = {"kind": self.kind}
        if self.api_id is not None:
            obj["api_id"] = self.api_id
        if self.clarification is not None:
            obj["clarification"] = self.clarification
        return obj


@dataclass(frozen=True)
class TraceEntry:
    stage: str
    prompt_digest: str
    raw_output: str
    duration_ms: float

    @property
    def is_backend_call(self) -> bool:
        return bool(self.prompt_digest)

    def to_obj(self) -> dict:
        return {
            "stage": self.stage,
            "prompt_digest": self.prompt_digest,
            "raw_output": self.raw_output,
            "duration_ms": self.duration_ms,
        }


@dataclass(frozen=True)
class AnswerOutcome:
    kind: str
    command: ApiCommand | None = None
    table: ResultTable | None = None
    clarification: str | None = None
    error: str | None = None
    trace: tuple[TraceEntry, ...] = ()

    def to_obj(self, include_trace: bool = False) -> dict:
        obj: dict = {"kind": self.kind}
        if self.command is not None:
            obj["command"] = self.command.to_obj()
        if self.table is not None:
            obj["table"] = self.table.to_obj()
        if self.clarification is not None:
            obj["clarification"] = self.clarification
        if self.error is not None:
            obj["error"] = self.error
        if include_trace:
            obj["trace"] = [t.to_obj() for t in self.trace]
        return obj


def prompt_digest(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()[:16]


def _oneline(query: str) -> str:
    return " ".join(query.split())


def _call(
    backend: BackendHandle,
    stage: str,
    prompt: str,
    params: GenerationParams,
    trace: list[TraceEntry] | None,
) -> str:
    # every complete() invocation gets a trace entry, raising ones included
    start = time.perf_counter()
    try:
        raw = backend.complete(prompt, params)
    except Exception as exc:
        if trace is not None:
            trace.append(
                TraceEntry(
                    stage=stage,
                    prompt_digest=prompt_digest(prompt),
                    raw_output=f"error: {exc}",
                    duration_ms=(time.perf_counter() - start) * 1000.0,
                )
            )
        raise
    if trace is not None:
        trace.append(
            TraceEntry(
                stage=stage,
                prompt_digest=prompt_digest(prompt),
                raw_output=raw,
                duration_ms=(time.perf_counter() - start) * 1000.0,
            )
        )
    return raw


# --- prompt builders ----------------------------------------------------------

def build_stage1_prompt(
    catalog: ApiCatalog,
    query: str,
    template: PromptTemplate,
    include_descriptions: bool = False,
    error_feedback: str = "",
    icl_examples: str = "",
) -> str:
    template.require("id_listing", "query")
    return template.render(
        id_listing=render_id_listing(catalog, include_descriptions),
        query=_oneline(query),
        error_feedback=error_feedback,
        icl_examples=icl_examples,
    )


def build_stage2_prompt(
    spec: ApiSpec,
    query: str,
    template: PromptTemplate,
    error_feedback: str = "",
    icl_examples: str = "",
) -> str:
    template.require("api_info", "query")
    return template.render(
        api_info=render_api_info_spec(spec),
        query=_oneline(query),
        error_feedback=error_feedback,
        icl_examples=icl_examples,
    )


# --- stage operations ------------------------------------------------------------

def recognize_api_id(
    backend: BackendHandle,
    catalog: ApiCatalog,
    query: str,
    template: PromptTemplate,
    params: GenerationParams,
    clarification: str = DEFAULT_CLARIFICATION,
    include_descriptions: bool = False,
    trace: list[TraceEntry] | None = None,
) -> RoutingOutcome:
    """Stage 1: exact-match the backend's output against the catalog ids.

    One retry with explicit feedback is allowed for output that is neither a
    catalog id nor the negative token; after that the output is a fault.
    """
    feedback = ""
    raw = ""
    for _ in range(2):
        prompt = build_stage1_prompt(
            catalog,
            query,
            template,
            include_descriptions=include_descriptions,
            error_feedback=feedback,
        )
        raw = _call(backend, "route", prompt, params, trace)
        out = raw.strip()
        if out in catalog:
            return RoutingOutcome.resolved(out)
        if out == UNRESOLVABLE:
            return RoutingOutcome.needs_clarification(clarification)
        feedback = format_error_feedback(
            [f"{out!r} is not an API id from the listing and not {UNRESOLVABLE}"]
        )
    raise UnrecognizedBackendOutput(raw)


def _parse_error_report(exc: CommandParseError) -> ValidationReport:
    code = {
        "NoJsonObjectFound": ViolationCode.NO_JSON,
        "JsonSyntaxError": ViolationCode.JSON_SYNTAX,
        "SchemaError": ViolationCode.SCHEMA,
    }.get(type(exc).__name__, ViolationCode.SCHEMA)
    return ValidationReport((Violation(code, "", str(exc)),))


def generate_command(
    backend: BackendHandle,
    spec: ApiSpec,
    query: str,
    template: PromptTemplate,
    params: GenerationParams,
    trace: list[TraceEntry] | None = None,
) -> ApiCommand:
    """Stage 2 with the repair loop: parse + validate, feed violations back,
    return the first command whose report is empty."""
    feedback = ""
    report = ValidationReport()
    for _ in range(params.retries + 1):
        prompt = build_stage2_prompt(spec, query, template, error_feedback=feedback)
        raw = _call(backend, "command", prompt, params, trace)
        try:
            cmd = parse_command(raw)
        except CommandParseError as exc:
            report = _parse_error_report(exc)
        else:
            report = validate_command(cmd, spec)
            if report.empty:
                return cmd
        feedback = format_error_feedback(report.messages())
    raise CommandInvalid(report)


# --- end to end ----------------------------------------------------------------

@dataclass(frozen=True)
class RouterConfig:
    stage1_template: PromptTemplate = default_template(1, STYLE_FINETUNE_SIMPLE)
    stage2_template: PromptTemplate = default_template(2, STYLE_FINETUNE_SIMPLE)
    params: GenerationParams = field(default_factory=GenerationParams)
    clarification: str = DEFAULT_CLARIFICATION
    include_descriptions: bool = False


def answer(
    backend: BackendHandle,
    catalog: ApiCatalog,
    store: Store | None,
    query: str,
    config: RouterConfig | None = None,
) -> AnswerOutcome:
    """Route, generate, execute. Faults become kind="failed"; a vague query
    becomes kind="clarify"; a zero-row result is still kind="answered"."""
    config = config or RouterConfig()
    trace: list[TraceEntry] = []
    try:
        outcome = recognize_api_id(
            backend,
            catalog,
            query,
            config.stage1_template,
            config.params,
            clarification=config.clarification,
            include_descriptions=config.include_descriptions,
            trace=trace,
        )
    except (BackendUnreachable, UnrecognizedBackendOutput, Nl2ApiError) as exc:
        return AnswerOutcome(kind=FAILED, error=f"route: {exc}", trace=tuple(trace))
    if not outcome.is_resolved:
        return AnswerOutcome(
            kind=CLARIFY, clarification=outcome.clarification, trace=tuple(trace)
        )
    spec = catalog.get(outcome.api_id)
    try:
        cmd = generate_command(
            backend, spec, query, config.stage2_template, config.params, trace=trace
        )
    except (BackendUnreachable, CommandInvalid, Nl2ApiError) as exc:
        return AnswerOutcome(kind=FAILED, error=f"command: {exc}", trace=tuple(trace))
    start = time.perf_counter()
    try:
        if store is None:
            raise Nl2ApiError("no store configured")
        table = execute(store, cmd, spec)
    except Nl2ApiError as exc:
        trace.append(
            TraceEntry("execute", "", str(exc), (time.perf_counter() - start) * 1000.0)
        )
        return AnswerOutcome(kind=FAILED, command=cmd, error=f"execute: {exc}", trace=tuple(trace))
    trace.append(
        TraceEntry(
            "execute", "", f"rows={len(table.rows)}", (time.perf_counter() - start) * 1000.0
        )
    )
    return AnswerOutcome(kind=ANSWERED, command=cmd, table=table, trace=tuple(trace))


class Pipeline:
    """Backend + catalog + optional store bundled behind the three calls the
    service, the evaluator and the CLI need."""

    def __init__(
        self,
        backend: BackendHandle,
        catalog: ApiCatalog,
        store: Store | None = None,
        config: RouterConfig | None = None,
    ):
        self.backend = backend
        self.catalog = catalog
        self.store = store
        self.config = config or RouterConfig()

    def route(self, query: str) -> RoutingOutcome:
        return recognize_api_id(
            self.backend,
            self.catalog,
            query,
            self.config.stage1_template,
            self.config.params,
            clarification=self.config.clarification,
            include_descriptions=self.config.include_descriptions,
        )

    def command(self, query: str, api_id: str) -> ApiCommand:
        spec = self.catalog.get(api_id)
        return generate_command(
            self.backend, spec, query, self.config.stage2_template, self.config.params
        )

    def answer(self, query: str) -> AnswerOutcome:
        return answer(self.backend, self.catalog, self.store, query, self.config)
