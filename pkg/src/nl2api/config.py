"""Pipeline configuration: a small key=value text file.

    # demo configuration
    catalog_path = fixtures/desk/catalog.json
    store_path = fixtures/desk/store
    aliases_path = fixtures/desk/aliases.csv
    backend = rule                      # rule | remote
    template_style = finetune_simple    # finetune_simple | generation_detailed
    retries = 2

Remote-backend keys (required iff backend = remote): endpoint_url,
model_name, credential_ref (the NAME of the environment variable holding
the API credential; the credential itself never appears in the file),
timeout_ms, in_flight_limit.

Relative paths are resolved against the config file's directory.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .catalog import ApiCatalog, load_catalog
from .datagen import AliasMap, load_alias_map
from .errors import ConfigError
from .router.backends import GenerationParams, RemoteBackend
from .router.pipeline import DEFAULT_CLARIFICATION, Pipeline, RouterConfig
from .router.rule import RuleBackend
from .router.templates import STYLES, STYLE_FINETUNE_SIMPLE, default_template
from .store import Store, load_store

BACKEND_KINDS = ("rule", "remote")

_KEYS = {
    "catalog_path",
    "store_path",
    "aliases_path",
    "backend",
    "endpoint_url",
    "model_name",
    "credential_ref",
    "timeout_ms",
    "template_style",
    "retries",
    "negative_clarification_template",
    "in_flight_limit",
    "include_descriptions",
}


@dataclass
class PipelineConfig:
    catalog_path: str
    store_path: str = ""
    aliases_path: str = ""
    backend: str = "rule"
    endpoint_url: str = ""
    model_name: str = ""
    credential_ref: str = ""
    timeout_ms: int = 30_000
    template_style: str = STYLE_FINETUNE_SIMPLE
    retries: int = 2
    negative_clarification_template: str = DEFAULT_CLARIFICATION
    in_flight_limit: int = 4
    include_descriptions: bool = False

    def validate(self) -> None:
        if not self.catalog_path:
            raise ConfigError("catalog_path is required")
        if self.backend not in BACKEND_KINDS:
            raise ConfigError(f"backend must be one of {BACKEND_KINDS}, got {self.backend!r}")
        if self.backend == "remote" and not (self.endpoint_url and self.model_name):
            raise ConfigError("remote backend requires endpoint_url and model_name")
        if self.template_style not in STYLES:
            raise ConfigError(f"template_style must be one of {STYLES}")
        if self.timeout_ms <= 0:
            raise ConfigError("timeout_ms must be positive")
        if self.retries < 0:
            raise ConfigError("retries must be >= 0")


def load_config(path: str | Path) -> PipelineConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    values: dict[str, str] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{line_no}: expected key = value")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"{path}:{line_no}: unknown key {key!r}")
        values[key] = value

    def _resolve(p: str) -> str:
        if not p:
            return ""
        candidate = Path(p)
        if not candidate.is_absolute():
            candidate = path.parent / candidate
        return str(candidate)

    config = PipelineConfig(
        catalog_path=_resolve(values.get("catalog_path", "")),
        store_path=_resolve(values.get("store_path", "")),
        aliases_path=_resolve(values.get("aliases_path", "")),
        backend=values.get("backend", "rule"),
        endpoint_url=values.get("endpoint_url", ""),
        model_name=values.get("model_name", ""),
        credential_ref=values.get("credential_ref", ""),
        timeout_ms=int(values.get("timeout_ms", "30000")),
        template_style=values.get("template_style", STYLE_FINETUNE_SIMPLE),
        retries=int(values.get("retries", "2")),
        negative_clarification_template=values.get(
            "negative_clarification_template", DEFAULT_CLARIFICATION
        ),
        in_flight_limit=int(values.get("in_flight_limit", "4")),
        include_descriptions=values.get("include_descriptions", "0") in ("1", "true", "yes"),
    )
    config.validate()
    return config


@dataclass
class LoadedPipeline:
    pipeline: Pipeline
    catalog: ApiCatalog
    store: Store | None
    aliases: AliasMap
    config: PipelineConfig


def build_pipeline(config: PipelineConfig) -> LoadedPipeline:
    config.validate()
    catalog = load_catalog(config.catalog_path)
    store = load_store(config.store_path, catalog) if config.store_path else None
    aliases = load_alias_map(config.aliases_path) if config.aliases_path else AliasMap({})
    if config.backend == "rule":
        entities = store.text_values() if store else set()
        backend = RuleBackend(
            catalog,
            entity_aliases=dict(aliases.entries),
            entities=entities,
            use_descriptions=config.include_descriptions,
        )
    else:
        backend = RemoteBackend(
            endpoint_url=config.endpoint_url,
            model_name=config.model_name,
            credential_ref=config.credential_ref,
            timeout_ms=config.timeout_ms,
            in_flight_limit=config.in_flight_limit,
        )
    router_config = RouterConfig(
        stage1_template=default_template(1, config.template_style),
        stage2_template=default_template(2, config.template_style),
        params=GenerationParams(retries=config.retries),
        clarification=config.negative_clarification_template,
        include_descriptions=config.include_descriptions,
    )
    pipeline = Pipeline(backend, catalog, store, router_config)
    return LoadedPipeline(
        pipeline=pipeline, catalog=catalog, store=store, aliases=aliases, config=config
    )
