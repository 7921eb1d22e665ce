"""Command-line interface.

    nl2api serve    --config CONFIG [--port 8080]
    nl2api ask      --config CONFIG
    nl2api gen-data --catalog CATALOG [--seeds FILE] [--aliases FILE]
                    --out-dir DIR [--n-per-api 8] [--negative-ratio 0.25] [--seed 0]
    nl2api eval     --config CONFIG --cases FILE [--stage2-gold-api]
                    [--compare bm25,dense] [--json-out FILE]
    nl2api validate --catalog CATALOG [--store DIR] [--dataset FILE]
    nl2api index    --catalog CATALOG --out FILE

Every subcommand exits 0 on success and nonzero with a diagnostic on
stderr; under the rule backend and a fixed seed all output is deterministic.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import datagen
from .baselines.bm25 import build_bm25_index
from .baselines.embed import HashingEmbedder
from .baselines.route import Bm25Router, DenseRouter, catalog_documents
from .catalog import load_catalog, validate_catalog
from .command import parse_command, validate_command
from .config import build_pipeline, load_config
from .errors import Nl2ApiError
from .evaluation import compare_methods, load_cases, render_comparison, render_metrics, run_eval
from .router.pipeline import ANSWERED, CLARIFY
from .router.rule import RuleBackend
from .router.templates import UNRESOLVABLE, default_template
from .store import load_store


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 1


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    loaded = build_pipeline(load_config(args.config))
    app = create_app(loaded.pipeline, ui_dir=args.ui_dir or None)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def _print_answer(outcome) -> None:
    for entry in outcome.trace:
        print(f"  [{entry.stage}] {entry.raw_output}")
    if outcome.kind == ANSWERED:
        table = outcome.table
        print("\t".join(table.columns))
        for row in table.rows:
            print("\t".join(str(v) for v in row))
        if not table.rows:
            print("(no rows)")
    elif outcome.kind == CLARIFY:
        print(outcome.clarification)
    else:
        print(f"failed: {outcome.error}")


def cmd_ask(args) -> int:
    loaded = build_pipeline(load_config(args.config))
    print("enter a query (blank line or Ctrl-D to quit)")
    while True:
        try:
            query = input("query> ").strip()
        except EOFError:
            print()
            return 0
        if not query:
            return 0
        outcome = loaded.pipeline.answer(query)
        _print_answer(outcome)
        if outcome.kind == CLARIFY:
            print("(rephrase and try again)")


def cmd_gen_data(args) -> int:
    catalog = load_catalog(args.catalog)
    seeds = datagen.load_seeds(args.seeds) if args.seeds else []
    aliases = datagen.load_alias_map(args.aliases) if args.aliases else datagen.AliasMap({})
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    backend = RuleBackend(
        catalog,
        entity_aliases=dict(aliases.entries),
        entities=set(aliases.entries.values()),
    )
    result = datagen.run_datagen(
        backend,
        catalog,
        seeds,
        aliases,
        stage1_template=default_template(1),
        stage2_template=default_template(2),
        n_per_api=args.n_per_api,
        negative_ratio=args.negative_ratio,
        seed=args.seed,
    )
    n1 = datagen.write_dataset(result.stage1, out_dir / "stage1_dataset.jsonl")
    n2 = datagen.write_dataset(result.stage2, out_dir / "stage2_dataset.jsonl")
    nr = datagen.export_review_queue(result.rejected, out_dir / "review_queue.jsonl")
    print(f"raw records        {result.raw_count}")
    print(f"accepted           {len(result.accepted)}")
    print(f"rejected           {nr}")
    print(f"stage1 examples    {n1}")
    print(f"stage2 examples    {n2}")
    return 0


def cmd_eval(args) -> int:
    loaded = build_pipeline(load_config(args.config))
    cases = load_cases(args.cases)
    metrics = run_eval(loaded.pipeline, cases, stage2_gold_api=args.stage2_gold_api)
    print(render_metrics(metrics))
    report = metrics.to_obj()
    if args.compare:
        methods = [("pipeline", loaded.pipeline)]
        for name in args.compare.split(","):
            name = name.strip()
            if name == "bm25":
                methods.append(("bm25", Bm25Router(loaded.catalog).route))
            elif name == "dense":
                methods.append(("dense", DenseRouter(loaded.catalog, HashingEmbedder()).route))
            elif name:
                return _fail(f"unknown comparison method {name!r}")
        rows = compare_methods(methods, cases)
        print()
        print(render_comparison(rows))
        report["comparison"] = [r.to_obj() for r in rows]
    if args.json_out:
        Path(args.json_out).write_text(
            json.dumps(report, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )
    return 0


def _validate_dataset(path: str, catalog) -> list[str]:
    problems = []
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            problems.append(f"{path}:{line_no}: invalid JSON: {exc}")
            continue
        if not all(isinstance(obj.get(k), str) for k in ("instruction", "input", "output")):
            problems.append(f"{path}:{line_no}: missing instruction/input/output fields")
            continue
        output = obj["output"]
        if output == UNRESOLVABLE or output in catalog:
            continue
        try:
            cmd = parse_command(output)
        except Nl2ApiError as exc:
            problems.append(f"{path}:{line_no}: output is neither a label nor a command: {exc}")
            continue
        if cmd.api_id not in catalog:
            problems.append(f"{path}:{line_no}: command api_id {cmd.api_id!r} not in catalog")
            continue
        report = validate_command(cmd, catalog.get(cmd.api_id))
        if not report.empty:
            problems.extend(f"{path}:{line_no}: {m}" for m in report.messages())
    return problems


def cmd_validate(args) -> int:
    problems: list[str] = []
    try:
        catalog = load_catalog(args.catalog)
    except Nl2ApiError as exc:
        return _fail(f"catalog: {exc}")
    report = validate_catalog(catalog)
    problems.extend(report.messages())
    if args.store:
        try:
            load_store(args.store, catalog)
        except Nl2ApiError as exc:
            problems.append(f"store: {exc}")
    if args.dataset:
        problems.extend(_validate_dataset(args.dataset, catalog))
    if problems:
        for p in problems:
            print(p, file=sys.stderr)
        return 1
    print("ok")
    return 0


def cmd_index(args) -> int:
    catalog = load_catalog(args.catalog)
    index = build_bm25_index(catalog_documents(catalog), k1=args.k1, b=args.b)
    Path(args.out).write_text(
        json.dumps(index.to_obj(), ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    print(f"indexed {index.n_docs} documents -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nl2api", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--ui-dir", default="", help="serve a built frontend at /ui")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("ask", help="interactive query loop")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_ask)

    p = sub.add_parser("gen-data", help="run the data generation pipeline")
    p.add_argument("--catalog", required=True)
    p.add_argument("--seeds", default="")
    p.add_argument("--aliases", default="")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--n-per-api", type=int, default=8)
    p.add_argument("--negative-ratio", type=float, default=datagen.DEFAULT_NEGATIVE_RATIO)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gen_data)

    p = sub.add_parser("eval", help="run the evaluation harness")
    p.add_argument("--config", required=True)
    p.add_argument("--cases", required=True)
    p.add_argument("--stage2-gold-api", action="store_true")
    p.add_argument("--compare", default="")
    p.add_argument("--json-out", default="")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("validate", help="validate catalog, store and datasets")
    p.add_argument("--catalog", required=True)
    p.add_argument("--store", default="")
    p.add_argument("--dataset", default="")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("index", help="dump the BM25 index sidecar")
    p.add_argument("--catalog", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--k1", type=float, default=1.2)
    p.add_argument("--b", type=float, default=0.75)
    p.set_defaults(func=cmd_index)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Nl2ApiError as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
