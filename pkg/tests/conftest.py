from __future__ import annotations

from pathlib import Path

import pytest

from nl2api.catalog import load_catalog
from nl2api.datagen import AliasMap, load_alias_map, run_datagen
from nl2api.errors import BackendUnreachable
from nl2api.evaluation import NEGATIVE_LABEL, EvalCase
from nl2api.router import Pipeline, RuleBackend
from nl2api.router.templates import default_template
from nl2api.store import load_store
from nl2api.synth import (
    VAGUE_QUERIES,
    make_companies,
    make_company_aliases,
    make_synthetic_catalog,
)

DESK = Path(__file__).resolve().parent.parent / "fixtures" / "desk"

FIG2_QUERY = "What’s Company XXX’s net profit for 2020?"
VAGUE_QUERY = "Tell me some information"
CLARIFICATION_TEXT = (
    "Please provide specific details for the information (company name, type of "
    "information, etc.) you want to inquire about."
)


class ScriptedBackend:
    """Replays a fixed list of outputs (the last one repeats); raising entries
    are raised instead of returned."""

    def __init__(self, outputs):
        self.outputs = list(outputs)
        self.calls = 0
        self.identity = "scripted"

    def complete(self, prompt, params):
        out = self.outputs[min(self.calls, len(self.outputs) - 1)]
        self.calls += 1
        if isinstance(out, Exception):
            raise out
        return out


class UnreachableBackend:
    identity = "unreachable"

    def complete(self, prompt, params):
        raise BackendUnreachable("scripted outage")


def records_to_cases(records) -> list[EvalCase]:
    cases = []
    for r in records:
        if r.is_negative:
            cases.append(EvalCase(r.query, NEGATIVE_LABEL))
        else:
            cases.append(EvalCase(r.query, r.command.api_id, r.command))
    return cases


# --- desk fixtures ------------------------------------------------------------

@pytest.fixture(scope="session")
def desk_catalog():
    return load_catalog(DESK / "catalog.json")


@pytest.fixture(scope="session")
def desk_store(desk_catalog):
    return load_store(DESK / "store", desk_catalog)


@pytest.fixture(scope="session")
def desk_aliases():
    return load_alias_map(DESK / "aliases.csv")


@pytest.fixture(scope="session")
def desk_backend(desk_catalog, desk_store, desk_aliases):
    return RuleBackend(
        desk_catalog,
        entity_aliases=dict(desk_aliases.entries),
        entities=desk_store.text_values(),
    )


@pytest.fixture(scope="session")
def desk_pipeline(desk_backend, desk_catalog, desk_store):
    return Pipeline(desk_backend, desk_catalog, desk_store)


# --- synthetic fixtures -----------------------------------------------------------

@pytest.fixture(scope="session")
def synth_catalog():
    return make_synthetic_catalog(60)


@pytest.fixture(scope="session")
def synth_companies():
    return make_companies(30)


@pytest.fixture(scope="session")
def synth_alias_map(synth_companies):
    return AliasMap(make_company_aliases(synth_companies))


@pytest.fixture(scope="session")
def synth_backend(synth_catalog, synth_companies, synth_alias_map):
    return RuleBackend(
        synth_catalog,
        entity_aliases=dict(synth_alias_map.entries),
        entities=synth_companies,
    )


@pytest.fixture(scope="session")
def synth_pipeline(synth_backend, synth_catalog):
    return Pipeline(synth_backend, synth_catalog)


@pytest.fixture(scope="session")
def synth_dataset(synth_backend, synth_catalog, synth_alias_map):
    """Full datagen run: 480 generated records, >=50 negatives, >=480 alias
    augmentations; the distribution the oracle suite evaluates against."""
    return run_datagen(
        synth_backend,
        synth_catalog,
        seeds=[],
        aliases=synth_alias_map,
        stage1_template=default_template(1),
        stage2_template=default_template(2),
        n_per_api=8,
        negative_ratio=0.1,
        negative_templates=VAGUE_QUERIES,
        seed=7,
    )


@pytest.fixture(scope="session")
def synth_eval_cases(synth_dataset):
    return records_to_cases(synth_dataset.records)
