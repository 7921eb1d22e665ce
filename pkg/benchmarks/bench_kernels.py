"""Benchmark the compiled kernels against the pure-Python fallback.

Runs the two hot loops (BM25 ranking over an inflated catalog corpus and
character-ngram hash embedding) once with each implementation and prints a
timing table.

    python3 benchmarks/bench_kernels.py [--docs 3000] [--queries 400] [--dim 256]
"""

from __future__ import annotations

import argparse
import importlib
import random
import time

import numpy as np

import nl2api.baselines.kernels as kernels
from nl2api.baselines import bm25 as bm25_mod
from nl2api.baselines import embed as embed_mod
from nl2api.baselines.route import catalog_documents
from nl2api.synth import make_synthetic_catalog


def make_corpus(n_docs: int, rng: random.Random) -> list[tuple[str, str]]:
    base = catalog_documents(make_synthetic_catalog(60))
    docs = []
    for i in range(n_docs):
        _, text = base[i % len(base)]
        extra = " ".join(rng.choices(text.split(), k=12))
        docs.append((f"d{i}", f"{text} {extra}"))
    return docs


def bench_implementation(name: str, impl, docs, queries, dim: int) -> dict[str, float]:
    kernels.fnv1a64 = impl.fnv1a64
    kernels.accumulate_ngrams = impl.accumulate_ngrams
    kernels.bm25_accumulate = impl.bm25_accumulate

    index = bm25_mod.build_bm25_index(docs)
    start = time.perf_counter()
    checksum = 0.0
    for query in queries:
        ranked = bm25_mod.bm25_rank(index, query, 5)
        checksum += ranked[0][1]
    bm25_s = time.perf_counter() - start

    start = time.perf_counter()
    acc = np.zeros(dim)
    for _, text in docs:
        acc += embed_mod.hash_embed(text, dim)
    embed_s = time.perf_counter() - start
    return {"name": name, "bm25_s": bm25_s, "embed_s": embed_s, "checksum": checksum}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--docs", type=int, default=3000)
    parser.add_argument("--queries", type=int, default=400)
    parser.add_argument("--dim", type=int, default=256)
    args = parser.parse_args()

    rng = random.Random(0)
    docs = make_corpus(args.docs, rng)
    vocab = sorted({w for _, t in docs for w in t.split()})
    queries = [" ".join(rng.choices(vocab, k=6)) for _ in range(args.queries)]

    pure = importlib.import_module("nl2api.baselines._kernels_py")
    rows = [bench_implementation("python", pure, docs, queries, args.dim)]
    try:
        compiled = importlib.import_module("nl2api.baselines._kernels")
        rows.append(bench_implementation("cython", compiled, docs, queries, args.dim))
    except ImportError:
        print("compiled kernels not built; showing pure Python only")

    assert len({round(r["checksum"], 6) for r in rows}) == 1, "implementations disagree"

    print(f"\ncorpus: {args.docs} docs, {args.queries} queries, dim {args.dim}")
    print(f"{'impl':8}  {'bm25 rank':>10}  {'hash embed':>10}")
    for row in rows:
        print(f"{row['name']:8}  {row['bm25_s']:>9.3f}s  {row['embed_s']:>9.3f}s")
    if len(rows) == 2:
        print(
            f"{'speedup':8}  {rows[0]['bm25_s'] / rows[1]['bm25_s']:>9.1f}x"
            f"  {rows[0]['embed_s'] / rows[1]['embed_s']:>9.1f}x"
        )


if __name__ == "__main__":
    main()
