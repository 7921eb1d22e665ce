"""Deterministic rule backend: a keyword/pattern stand-in for a fine-tuned model.

It self-routes on the task marker embedded in each prompt and solves all
three tasks with transparent rules:

  select-api           token overlap between the query and each API's name
                       and aliases (plus description when enabled), with an
                       optional learned-abbreviation lexicon; below-threshold
                       queries get the negative label.
  build-command        per-type value extraction (quoted spans and known
                       entity names for text, 4-digit years for year-like
                       integers, literal matches for enums, ISO dates,
                       decimal literals) and output selection by phrase
                       containment; emits the canonical JSON command.
  synthesize-examples  seeded paraphrase templates over the API's argument
                       domains, one {"query", "command"} JSON object per line.

Identical prompts always produce byte-identical output, which is what makes
the end-to-end oracle suite exact.
"""

from __future__ import annotations

import json
import random
import re

from ..catalog import ApiCatalog, ApiSpec
from ..command import ApiCommand, serialize_command
from ..errors import UnknownStageMarker
from ..textutil import token_set, tokenize
from .backends import GenerationParams
from .templates import (
    COUNT_LINE_RE,
    STAGE1_MARKER,
    STAGE2_MARKER,
    SYNTH_MARKER,
    UNRESOLVABLE,
    detect_stage,
    extract_query,
)

_API_ID_LINE_RE = re.compile(r"^API-ID: (\S+)$", re.MULTILINE)
_QUOTED_RE = re.compile(r'"([^"]+)"')
_DATE_RE = re.compile(r"\b(\d{4}-\d{2}-\d{2})\b")
_DECIMAL_RE = re.compile(r"\b(\d+\.\d+)\b")
_INTEGER_RE = re.compile(r"\b(\d+)\b")

SYNTH_TEMPLATES = (
    'What is the {phrase} of "{company}" in {year}{clause}?',
    'Please show the {phrase} for "{company}" in {year}{clause}.',
    'Find the {phrase} of "{company}" for the year {year}{clause}.',
    'I want to know the {phrase} of "{company}" in {year}{clause}.',
    'Give me the {phrase} of "{company}" in {year}{clause}.',
    'How large was the {phrase} of "{company}" in {year}{clause}?',
)

_FALLBACK_COMPANIES = ("Acme Holdings", "Borealis Group", "Cobalt Partners")

DEFAULT_SYNTH_COUNT = 32


class RuleBackend:
    """Deterministic completion backend driven by the catalog.

    entity_aliases maps abbreviation -> canonical organization name (the
    normalization the fine-tuned system learned from alias-augmented data);
    entities lists canonical names; api_aliases maps learned shorthand for an
    API (absent from the catalog text itself) -> api_id.
    """

    def __init__(
        self,
        catalog: ApiCatalog,
        entity_aliases: dict[str, str] | None = None,
        entities=(),
        api_aliases: dict[str, str] | None = None,
        min_overlap: int = 1,
        use_descriptions: bool = False,
    ):
        self.catalog = catalog
        self.min_overlap = min_overlap
        self.use_descriptions = use_descriptions
        self.identity = "rule:v1"
        self._alias_to_canonical = {
            a.lower(): c for a, c in (entity_aliases or {}).items() if a and c
        }
        canonical = set(entities) | set(self._alias_to_canonical.values())
        self._canonical_by_lower = {c.lower(): c for c in canonical if c}
        # longest first so "Kestrel Dynamics" wins over any shorter overlap
        self._entity_phrases = sorted(
            list(self._alias_to_canonical) + list(self._canonical_by_lower),
            key=lambda p: (-len(p), p),
        )
        self._api_aliases = {
            a.lower(): api_id for a, api_id in (api_aliases or {}).items() if a
        }
        self._api_tokens: dict[str, set[str]] = {}
        for api in catalog.apis:
            tokens = token_set(api.display_name)
            for alias in api.aliases:
                tokens |= token_set(alias)
            if use_descriptions:
                tokens |= token_set(api.description)
            self._api_tokens[api.api_id] = tokens

    # --- BackendHandle -------------------------------------------------

    def complete(self, prompt: str, params: GenerationParams) -> str:
        stage = detect_stage(prompt)
        if stage == STAGE1_MARKER:
            return self._select_api(prompt)
        if stage == STAGE2_MARKER:
            return self._build_command(prompt)
        if stage == SYNTH_MARKER:
            return self._synthesize(prompt, params)
        raise UnknownStageMarker("prompt carries no known task marker")

    # --- stage 1 ---------------------------------------------------------

    def _select_api(self, prompt: str) -> str:
        query = extract_query(prompt)
        qtokens = token_set(query)
        for alias, api_id in sorted(self._api_aliases.items(), key=lambda kv: (-len(kv[0]), kv[0])):
            if token_set(alias) <= qtokens and api_id in self.catalog:
                return api_id
        best_id = UNRESOLVABLE
        best_score = 0
        for api in self.catalog.apis:
            score = len(qtokens & self._api_tokens[api.api_id])
            if score > best_score:
                best_id, best_score = api.api_id, score
        if best_score < self.min_overlap:
            return UNRESOLVABLE
        return best_id

    # --- stage 2 ---------------------------------------------------------

    def _resolve_entity(self, span: str) -> str:
        lowered = span.lower()
        if lowered in self._alias_to_canonical:
            return self._alias_to_canonical[lowered]
        if lowered in self._canonical_by_lower:
            return self._canonical_by_lower[lowered]
        return span

    @staticmethod
    def _word_normalize(text: str) -> str:
        return " " + " ".join(tokenize(text)) + " "

    def _scan_entity(self, query: str) -> str | None:
        normalized = self._word_normalize(query)
        for phrase in self._entity_phrases:
            needle = self._word_normalize(phrase)
            if needle.strip() and needle in normalized:
                return self._resolve_entity(phrase)
        return None

    def _build_command(self, prompt: str) -> str:
        m = _API_ID_LINE_RE.search(prompt)
        if not m:
            raise UnknownStageMarker("command prompt carries no API-ID line")
        spec = self.catalog.get(m.group(1))
        query = extract_query(prompt)
        qtokens = token_set(query)

        dates = _DATE_RE.findall(query)
        masked = _DATE_RE.sub(" ", query)
        decimals = _DECIMAL_RE.findall(masked)
        masked = _DECIMAL_RE.sub(" ", masked)
        integers = _INTEGER_RE.findall(masked)
        quoted = _QUOTED_RE.findall(query)

        used_quotes = 0
        used_dates = 0
        used_decimals = 0
        used_integers: set[int] = set()
        inputs: dict = {}
        for arg in spec.inputs:
            if arg.value_type == "text":
                if used_quotes < len(quoted):
                    inputs[arg.name] = self._resolve_entity(quoted[used_quotes])
                    used_quotes += 1
                else:
                    found = self._scan_entity(query)
                    if found is not None:
                        inputs[arg.name] = found
            elif arg.value_type == "integer":
                year_like = "year" in arg.name.lower()
                for i, tok in enumerate(integers):
                    if i in used_integers:
                        continue
                    if year_like and len(tok) != 4:
                        continue
                    inputs[arg.name] = int(tok)
                    used_integers.add(i)
                    break
            elif arg.value_type == "enum":
                for value in arg.enum_values or ():
                    if token_set(value) <= qtokens:
                        inputs[arg.name] = value
                        break
            elif arg.value_type == "date":
                if used_dates < len(dates):
                    inputs[arg.name] = dates[used_dates]
                    used_dates += 1
            elif arg.value_type == "decimal":
                if used_decimals < len(decimals):
                    inputs[arg.name] = float(decimals[used_decimals])
                    used_decimals += 1

        info = []
        for out in spec.outputs:
            name_tokens = token_set(out.name)
            meaning_tokens = token_set(out.meaning)
            if (name_tokens and name_tokens <= qtokens) or (
                meaning_tokens and meaning_tokens <= qtokens
            ):
                info.append(out.name)
        if not info:
            info = list(spec.output_names)

        return serialize_command(ApiCommand(spec.api_id, inputs, tuple(info)))

    # --- synthesis --------------------------------------------------------

    def _synth_inputs(self, spec: ApiSpec, rng: random.Random) -> tuple[dict, dict]:
        """Choose values for the required inputs; returns (inputs, query parts)."""
        companies = sorted(self._canonical_by_lower.values()) or list(_FALLBACK_COMPANIES)
        inputs: dict = {}
        parts = {"company": companies[rng.randrange(len(companies))], "clause": ""}
        filled_text = False
        for arg in spec.inputs:
            if not arg.required:
                continue
            if arg.value_type == "text" and not filled_text:
                inputs[arg.name] = parts["company"]
                filled_text = True
            elif arg.value_type == "integer":
                year = 2000 + rng.randrange(30)
                inputs[arg.name] = year
                parts["year"] = year
            elif arg.value_type == "enum" and arg.enum_values:
                value = arg.enum_values[rng.randrange(len(arg.enum_values))]
                inputs[arg.name] = value
                parts["clause"] = f" for the {value} period"
        parts.setdefault("year", 2000 + rng.randrange(30))
        return inputs, parts

    def _synthesize(self, prompt: str, params: GenerationParams) -> str:
        m = _API_ID_LINE_RE.search(prompt)
        if not m:
            raise UnknownStageMarker("synthesis prompt carries no API-ID line")
        spec = self.catalog.get(m.group(1))
        count_match = COUNT_LINE_RE.search(prompt)
        n = int(count_match.group(1)) if count_match else DEFAULT_SYNTH_COUNT
        seed = params.seed if params.seed is not None else 0
        rng = random.Random(f"{spec.api_id}|{seed}")

        lines = []
        for i in range(n):
            output = spec.outputs[rng.randrange(len(spec.outputs))] if spec.outputs else None
            inputs, parts = self._synth_inputs(spec, rng)
            phrase = (output.meaning or output.name) if output else "details"
            query = SYNTH_TEMPLATES[i % len(SYNTH_TEMPLATES)].format(
                phrase=phrase,
                company=parts["company"],
                year=parts.get("year", ""),
                clause=parts["clause"],
            )
            info = [output.name] if output else list(spec.output_names)
            command = ApiCommand(spec.api_id, inputs, tuple(info))
            lines.append(
                json.dumps(
                    {"query": query, "command": command.to_obj()},
                    ensure_ascii=False,
                )
            )
        return "\n".join(lines)
