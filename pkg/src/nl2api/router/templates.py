"""Prompt templates for the two pipeline stages and for data synthesis.

Two styles ship as defaults. `finetune_simple` is bare and direct: no role
setup, no worked examples — the right shape for a fine-tuned or rule-driven
backend where extra prompt scaffolding only costs tokens. `generation_detailed`
adds role setup, a fuller task explanation and in-context examples, which
general-purpose remote models need to hit the output grammar.

Each prompt opens with a machine-readable task marker line so a
self-routing backend can tell the stages apart; remote models just see an
innocuous comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import TemplateMissingPlaceholder

STYLE_FINETUNE_SIMPLE = "finetune_simple"
STYLE_GENERATION_DETAILED = "generation_detailed"
STYLES = (STYLE_FINETUNE_SIMPLE, STYLE_GENERATION_DETAILED)

PLACEHOLDERS = (
    "id_listing",
    "api_info",
    "query",
    "icl_examples",
    "error_feedback",
    "seed_questions",
)
_PLACEHOLDER_RE = re.compile(r"\{(" + "|".join(PLACEHOLDERS) + r")\}")

STAGE1_MARKER = "## task: select-api"
STAGE2_MARKER = "## task: build-command"
SYNTH_MARKER = "## task: synthesize-examples"

UNRESOLVABLE = "UNRESOLVABLE"

QUERY_LINE_PREFIX = "Query: "
COUNT_LINE_RE = re.compile(r"^Generate exactly (\d+) records\b", re.MULTILINE)


@dataclass(frozen=True)
class PromptTemplate:
    name: str
    text: str
    style: str = STYLE_FINETUNE_SIMPLE

    def placeholders(self) -> set[str]:
        return set(_PLACEHOLDER_RE.findall(self.text))

    def count(self, placeholder: str) -> int:
        return len(re.findall(r"\{" + placeholder + r"\}", self.text))

    def segments(self) -> list[tuple[str, str]]:
        """("literal", text) / ("placeholder", name) pieces, in order."""
        out: list[tuple[str, str]] = []
        pos = 0
        for m in _PLACEHOLDER_RE.finditer(self.text):
            if m.start() > pos:
                out.append(("literal", self.text[pos : m.start()]))
            out.append(("placeholder", m.group(1)))
            pos = m.end()
        if pos < len(self.text):
            out.append(("literal", self.text[pos:]))
        return out

    def require(self, *names: str) -> None:
        for name in names:
            if self.count(name) != 1:
                raise TemplateMissingPlaceholder(
                    f"template {self.name!r} must use {{{name}}} exactly once"
                )

    def render(self, **values: str) -> str:
        return _PLACEHOLDER_RE.sub(lambda m: values.get(m.group(1), ""), self.text)


STAGE1_SIMPLE = PromptTemplate(
    name="stage1-simple",
    style=STYLE_FINETUNE_SIMPLE,
    text=(
        f"{STAGE1_MARKER}\n"
        "Select the one API that can answer the user query. Respond with exactly one\n"
        "API id from the listing below and nothing else. If no listed API fits,\n"
        f"respond with the single token {UNRESOLVABLE}.\n"
        "\n"
        "APIs:\n"
        "{id_listing}"
        "{error_feedback}"
        f"{QUERY_LINE_PREFIX}{{query}}\n"
        "Answer:"
    ),
)

STAGE1_DETAILED = PromptTemplate(
    name="stage1-detailed",
    style=STYLE_GENERATION_DETAILED,
    text=(
        f"{STAGE1_MARKER}\n"
        "You are the routing layer of a structured-data question answering service.\n"
        "Your job is to map the user's query to the single API that can answer it.\n"
        "Each line below lists one API as `id<TAB>name`. Read the query, pick the\n"
        "best-matching API, and respond with its id and nothing else - no prose,\n"
        "no punctuation. Some queries are too vague to map to any API; for those,\n"
        f"respond with the single token {UNRESOLVABLE}.\n"
        "\n"
        "APIs:\n"
        "{id_listing}"
        "\n"
        "Examples:\n"
        "{icl_examples}"
        "{error_feedback}"
        f"{QUERY_LINE_PREFIX}{{query}}\n"
        "Answer:"
    ),
)

STAGE2_SIMPLE = PromptTemplate(
    name="stage2-simple",
    style=STYLE_FINETUNE_SIMPLE,
    text=(
        f"{STAGE2_MARKER}\n"
        "Produce the JSON search command answering the user query with the API\n"
        'described below. Respond with a single JSON object of the form\n'
        '{"api_id": ..., "inputs": {...}, "info": [...]} and nothing else.\n'
        "\n"
        "{api_info}"
        "{error_feedback}"
        f"{QUERY_LINE_PREFIX}{{query}}\n"
        "Command:"
    ),
)

STAGE2_DETAILED = PromptTemplate(
    name="stage2-detailed",
    style=STYLE_GENERATION_DETAILED,
    text=(
        f"{STAGE2_MARKER}\n"
        "You are the command generator of a structured-data question answering\n"
        "service. Using the API description below, translate the user's query into\n"
        "one JSON search command. The command must contain exactly three fields:\n"
        '"api_id" (the id shown below), "inputs" (a value for every required input\n'
        'argument, typed as declared), and "info" (the output argument names the\n'
        "user asked for). Emit only the JSON object - no explanation, no code\n"
        "fences.\n"
        "\n"
        "{api_info}"
        "\n"
        "Examples:\n"
        "{icl_examples}"
        "{error_feedback}"
        f"{QUERY_LINE_PREFIX}{{query}}\n"
        "Command:"
    ),
)

SYNTH_DETAILED = PromptTemplate(
    name="synth-detailed",
    style=STYLE_GENERATION_DETAILED,
    text=(
        f"{SYNTH_MARKER}\n"
        "You are an expert data annotator for a structured-data search service.\n"
        "Write realistic user questions that the API described below can answer,\n"
        "together with the exact search command for each question.\n"
        "\n"
        "{api_info}"
        "\n"
        "Value domains: text arguments take organization names (quote them in the\n"
        "question); integer arguments named like a year take a 4-digit year; enum\n"
        "arguments take one of their listed values, mentioned verbatim in the\n"
        "question; date arguments take YYYY-MM-DD dates.\n"
        "\n"
        "Seed questions for inspiration:\n"
        "{seed_questions}"
        "{icl_examples}"
        'Emit one JSON object per line, each of the form\n'
        '{"query": "<question>", "command": {"api_id": ..., "inputs": {...}, "info": [...]}}\n'
        "with no surrounding prose.\n"
    ),
)

_DEFAULTS = {
    (1, STYLE_FINETUNE_SIMPLE): STAGE1_SIMPLE,
    (1, STYLE_GENERATION_DETAILED): STAGE1_DETAILED,
    (2, STYLE_FINETUNE_SIMPLE): STAGE2_SIMPLE,
    (2, STYLE_GENERATION_DETAILED): STAGE2_DETAILED,
}


def default_template(stage: int, style: str = STYLE_FINETUNE_SIMPLE) -> PromptTemplate:
    try:
        return _DEFAULTS[(stage, style)]
    except KeyError:
        raise ValueError(f"no default template for stage {stage}, style {style!r}") from None


def format_error_feedback(messages) -> str:
    if not messages:
        return ""
    lines = "\n".join(f"- {m}" for m in messages)
    return f"Your previous response was invalid:\n{lines}\nFollow the required output format exactly.\n"


def detect_stage(prompt: str) -> str | None:
    first_line = prompt.split("\n", 1)[0].strip()
    for marker in (STAGE1_MARKER, STAGE2_MARKER, SYNTH_MARKER):
        if first_line == marker:
            return marker
    return None


def extract_query(prompt: str) -> str:
    """Pull the query back out of a rendered prompt (rule backend path)."""
    for line in prompt.splitlines():
        if line.startswith(QUERY_LINE_PREFIX):
            return line[len(QUERY_LINE_PREFIX) :]
    return ""
