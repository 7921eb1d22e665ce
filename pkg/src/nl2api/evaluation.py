"""Gold-labeled accuracy for routing, command generation, and end to end.

A case is overall-correct iff its routing is correct AND (it is a negative,
or the generated command content-matches the gold command), so
overall_accuracy can never exceed stage1_accuracy. Command accuracy is
conditional by default (measured over the cases whose routing succeeded,
mirroring the pipeline structure); stage2_gold_api=True instead feeds every
positive case's gold API to stage 2, the protocol used when the two tasks
were trained and tested independently.

Eval set files are line-delimited JSON:
    {"query": ..., "gold_api_id": <id or "NEGATIVE">, "gold_command": {...}?}
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .command import ApiCommand, command_from_obj, commands_equal
from .errors import LengthMismatch, Nl2ApiError
from .router.pipeline import CLARIFICATION_NEEDED, Pipeline, RoutingOutcome

NEGATIVE_LABEL = "NEGATIVE"

PROTOCOL_CONDITIONAL = "conditional"
PROTOCOL_GOLD_API = "gold-api"


@dataclass(frozen=True)
class EvalCase:
    query: str
    gold_api_id: str
    gold_command: ApiCommand | None = None

    def __post_init__(self):
        if self.is_negative and self.gold_command is not None:
            raise ValueError("negative cases carry no gold command")
        if not self.is_negative and self.gold_command is None:
            raise ValueError(f"positive case for {self.gold_api_id!r} needs a gold command")

    @property
    def is_negative(self) -> bool:
        return self.gold_api_id == NEGATIVE_LABEL

    def to_obj(self) -> dict:
        obj: dict = {"query": self.query, "gold_api_id": self.gold_api_id}
        if self.gold_command is not None:
            obj["gold_command"] = self.gold_command.to_obj()
        return obj

    @classmethod
    def from_obj(cls, obj: dict) -> "EvalCase":
        gold = obj.get("gold_command")
        return cls(
            query=obj["query"],
            gold_api_id=obj["gold_api_id"],
            gold_command=command_from_obj(gold) if gold is not None else None,
        )


@dataclass(frozen=True)
class ApiBreakdown:
    n: int
    stage1_acc: float
    stage2_acc: float

    def to_obj(self) -> dict:
        return {"n": self.n, "stage1_acc": self.stage1_acc, "stage2_acc": self.stage2_acc}


@dataclass(frozen=True)
class Metrics:
    stage1_accuracy: float
    stage2_accuracy: float
    overall_accuracy: float
    n_cases: int
    per_api_breakdown: dict[str, ApiBreakdown] = field(default_factory=dict)
    protocol: str = PROTOCOL_CONDITIONAL
    n_stage2_cases: int = 0

    def to_obj(self) -> dict:
        return {
            "stage1_accuracy": self.stage1_accuracy,
            "stage2_accuracy": self.stage2_accuracy,
            "overall_accuracy": self.overall_accuracy,
            "n_cases": self.n_cases,
            "n_stage2_cases": self.n_stage2_cases,
            "protocol": self.protocol,
            "per_api_breakdown": {
                k: v.to_obj() for k, v in sorted(self.per_api_breakdown.items())
            },
        }


def _mean(flags: list[bool]) -> float:
    # vacuous accuracy over an empty pool is reported as 1.0
    if not flags:
        return 1.0
    return sum(flags) / len(flags)


def routing_matches(outcome: RoutingOutcome, gold_api_id: str) -> bool:
    if outcome.kind == CLARIFICATION_NEEDED:
        return gold_api_id == NEGATIVE_LABEL
    return outcome.api_id == gold_api_id


def stage1_accuracy(preds: list[RoutingOutcome], golds: list[str]) -> float:
    """Exact-match routing accuracy; a clarification matches a NEGATIVE gold."""
    if len(preds) != len(golds):
        raise LengthMismatch(f"{len(preds)} predictions vs {len(golds)} golds")
    return _mean([routing_matches(p, g) for p, g in zip(preds, golds)])


def stage2_accuracy(preds: list[ApiCommand | None], golds: list[ApiCommand]) -> float:
    """Mean content equality; a missing prediction counts as incorrect."""
    if len(preds) != len(golds):
        raise LengthMismatch(f"{len(preds)} predictions vs {len(golds)} golds")
    return _mean([p is not None and commands_equal(p, g) for p, g in zip(preds, golds)])


@dataclass(frozen=True)
class CaseResult:
    case: EvalCase
    stage1_correct: bool
    stage2_attempted: bool
    stage2_correct: bool
    overall_correct: bool
    diagnostic: str = ""


def _evaluate_case(pipeline: Pipeline, case: EvalCase, stage2_gold_api: bool) -> CaseResult:
    diagnostic = ""
    try:
        outcome = pipeline.route(case.query)
        s1 = routing_matches(outcome, case.gold_api_id)
    except Nl2ApiError as exc:
        return CaseResult(case, False, False, False, False, f"route: {exc}")

    attempted = False
    s2 = False
    if not case.is_negative:
        if stage2_gold_api:
            target = case.gold_api_id
            attempted = True
        elif s1:
            target = outcome.api_id
            attempted = True
        if attempted:
            try:
                cmd = pipeline.command(case.query, target)
                s2 = commands_equal(cmd, case.gold_command)
            except Nl2ApiError as exc:
                diagnostic = f"command: {exc}"
    overall = s1 and (case.is_negative or s2)
    return CaseResult(case, s1, attempted, s2, overall, diagnostic)


def run_eval(
    pipeline: Pipeline,
    cases: list[EvalCase],
    stage2_gold_api: bool = False,
    workers: int = 1,
) -> Metrics:
    """Evaluate every case; faults are counted incorrect, never raised."""
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(lambda c: _evaluate_case(pipeline, c, stage2_gold_api), cases)
            )
    else:
        results = [_evaluate_case(pipeline, c, stage2_gold_api) for c in cases]

    stage2_pool = [r for r in results if r.stage2_attempted]
    per_api: dict[str, ApiBreakdown] = {}
    for api_id in sorted({r.case.gold_api_id for r in results}):
        mine = [r for r in results if r.case.gold_api_id == api_id]
        mine_s2 = [r for r in mine if r.stage2_attempted]
        per_api[api_id] = ApiBreakdown(
            n=len(mine),
            stage1_acc=_mean([r.stage1_correct for r in mine]),
            stage2_acc=_mean([r.stage2_correct for r in mine_s2]),
        )
    return Metrics(
        stage1_accuracy=_mean([r.stage1_correct for r in results]),
        stage2_accuracy=_mean([r.stage2_correct for r in stage2_pool]),
        overall_accuracy=_mean([r.overall_correct for r in results]),
        n_cases=len(results),
        per_api_breakdown=per_api,
        protocol=PROTOCOL_GOLD_API if stage2_gold_api else PROTOCOL_CONDITIONAL,
        n_stage2_cases=len(stage2_pool),
    )


# --- method comparison ---------------------------------------------------------

@dataclass(frozen=True)
class MethodRow:
    name: str
    routing_accuracy: float
    overall_accuracy: float | None = None

    def to_obj(self) -> dict:
        obj: dict = {"name": self.name, "routing_accuracy": self.routing_accuracy}
        if self.overall_accuracy is not None:
            obj["overall_accuracy"] = self.overall_accuracy
        return obj


def compare_methods(methods, cases: list[EvalCase]) -> list[MethodRow]:
    """Per-method routing accuracy over the same cases, in declaration order.

    methods is a list of (name, route_callable) pairs or (name, Pipeline)
    pairs; pipelines additionally report overall accuracy. Routing-only
    baselines can neither refuse negatives nor fill arguments, so they are
    scored on routing alone (the comparison is generous to them).
    """
    if not methods:
        raise ValueError("compare_methods needs at least one method")
    rows = []
    for name, method in methods:
        if isinstance(method, Pipeline):
            metrics = run_eval(method, cases)
            rows.append(MethodRow(name, metrics.stage1_accuracy, metrics.overall_accuracy))
            continue
        hits = []
        for case in cases:
            try:
                result = method(case.query)
            except Nl2ApiError:
                hits.append(False)
                continue
            if isinstance(result, RoutingOutcome):
                hits.append(routing_matches(result, case.gold_api_id))
            else:
                hits.append(result == case.gold_api_id)
        rows.append(MethodRow(name, _mean(hits)))
    return rows


# --- files and rendering ----------------------------------------------------------

def write_cases(cases: list[EvalCase], path: str | Path) -> int:
    with Path(path).open("w", encoding="utf-8") as fh:
        for case in cases:
            fh.write(json.dumps(case.to_obj(), ensure_ascii=False) + "\n")
    return len(cases)


def load_cases(path: str | Path) -> list[EvalCase]:
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            out.append(EvalCase.from_obj(json.loads(line)))
    return out


def render_metrics(metrics: Metrics) -> str:
    lines = [
        f"cases            {metrics.n_cases}",
        f"protocol         {metrics.protocol}",
        f"stage1_accuracy  {metrics.stage1_accuracy:.3f}",
        f"stage2_accuracy  {metrics.stage2_accuracy:.3f} (over {metrics.n_stage2_cases} cases)",
        f"overall_accuracy {metrics.overall_accuracy:.3f}",
    ]
    if metrics.n_cases == 0:
        lines.append("note: empty case set, accuracies are vacuously 1.0")
    return "\n".join(lines)


def render_comparison(rows: list[MethodRow]) -> str:
    width = max(len(r.name) for r in rows)
    lines = [f"{'method'.ljust(width)}  routing  overall"]
    for r in rows:
        overall = f"{r.overall_accuracy:.3f}" if r.overall_accuracy is not None else "-"
        lines.append(f"{r.name.ljust(width)}  {r.routing_accuracy:.3f}    {overall}")
    return "\n".join(lines)
