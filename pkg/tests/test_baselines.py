from __future__ import annotations

import math
import random

import pytest

from nl2api.baselines import (
    Bm25Router,
    DenseRouter,
    HashingEmbedder,
    bm25_rank,
    bm25_score,
    build_bm25_index,
    hash_embed,
    route_by_retrieval,
)
from nl2api.catalog import ApiCatalog
from nl2api.errors import EmptyCorpus, UnknownDocId
from nl2api.textutil import tokenize

from tests.oracles import bm25_brute_score


def test_tokenize_splits_and_lowercases():
    assert tokenize("Net_Profit, 2020") == ["net", "profit", "2020"]


def test_tokenize_cjk_bigrams():
    tokens = tokenize("净利润")
    assert "净利" in tokens and "利润" in tokens


def test_build_two_doc_corpus():
    index = build_bm25_index(
        [("a", "net profit indicators"), ("b", "judicial case lookup")]
    )
    assert index.n_docs == 2
    assert index.doc_freqs["net"] == 1
    assert index.avgdl == 3.0


def test_build_single_doc():
    index = build_bm25_index([("only", "alpha beta alpha")])
    assert index.avgdl == 3
    assert all(df == 1 for df in index.doc_freqs.values())


def test_build_validations():
    with pytest.raises(EmptyCorpus):
        build_bm25_index([])
    with pytest.raises(ValueError):
        build_bm25_index([("a", "x")], k1=0)
    with pytest.raises(ValueError):
        build_bm25_index([("a", "x")], b=1.5)


def test_score_zero_overlap():
    index = build_bm25_index([("a", "alpha beta")])
    assert bm25_score(index, "gamma delta", "a") == 0.0


def test_score_hand_computed():
    # d1 scores idf(beta) for query "beta": tf=1, len=2=avgdl, so the tf
    # factor (k1+1)/(1+k1) collapses to 1
    docs = [("d1", "alpha beta"), ("d2", "beta gamma gamma"), ("d3", "delta")]
    index = build_bm25_index(docs, k1=1.2, b=0.75)
    expected_idf = math.log((3 - 2 + 0.5) / (2 + 0.5) + 1.0)
    assert abs(bm25_score(index, "beta", "d1") - expected_idf) < 1e-9

    # d2, query "gamma": tf=2, dl=3, avgdl=2
    idf = math.log((3 - 1 + 0.5) / (1 + 0.5) + 1.0)
    norm = 1.2 * (1 - 0.75 + 0.75 * 3 / 2.0)
    expected = idf * 2 * 2.2 / (2 + norm)
    assert abs(bm25_score(index, "gamma", "d2") - expected) < 1e-9


def test_repeated_query_term_never_decreases():
    index = build_bm25_index([("a", "alpha beta"), ("b", "beta beta gamma")])
    single = bm25_score(index, "beta", "b")
    double = bm25_score(index, "beta beta", "b")
    assert double >= single


def test_score_unknown_doc():
    index = build_bm25_index([("a", "alpha")])
    with pytest.raises(UnknownDocId):
        bm25_score(index, "alpha", "zzz")


def test_rank_top1_and_truncation():
    docs = [("d1", "alpha beta"), ("d2", "net profit report"), ("d3", "delta")]
    index = build_bm25_index(docs)
    top = bm25_rank(index, "profit", 1)
    assert top[0][0] == "d2"
    assert len(bm25_rank(index, "profit", 99)) == 3
    with pytest.raises(ValueError):
        bm25_rank(index, "profit", 0)


def test_rank_empty_query_insertion_order():
    docs = [("d1", "alpha"), ("d2", "beta"), ("d3", "gamma")]
    index = build_bm25_index(docs)
    ranked = bm25_rank(index, "", 3)
    assert [d for d, _ in ranked] == ["d1", "d2", "d3"]
    assert all(s == 0.0 for _, s in ranked)


def test_rank_sorted_non_increasing():
    rng = random.Random(3)
    vocab = [f"w{i}" for i in range(15)]
    docs = [
        (f"d{i}", " ".join(rng.choices(vocab, k=rng.randrange(1, 12)))) for i in range(8)
    ]
    index = build_bm25_index(docs)
    ranked = bm25_rank(index, " ".join(rng.choices(vocab, k=5)), 8)
    scores = [s for _, s in ranked]
    assert scores == sorted(scores, reverse=True)


def test_idf_non_negative():
    index = build_bm25_index([(f"d{i}", "common shared") for i in range(10)])
    for term, df in index.doc_freqs.items():
        assert df <= index.n_docs
        assert index.idf(term) >= 0.0
    assert index.idf("unseen") >= 0.0


def test_score_matches_brute_force_sample():
    rng = random.Random(17)
    vocab = [f"t{i}" for i in range(20)]
    for _ in range(20):
        docs = [
            (f"d{i}", " ".join(rng.choices(vocab, k=rng.randrange(1, 15))))
            for i in range(rng.randrange(1, 10))
        ]
        index = build_bm25_index(docs)
        query = " ".join(rng.choices(vocab, k=rng.randrange(1, 6)))
        for doc_id, _ in docs:
            assert abs(
                bm25_score(index, query, doc_id) - bm25_brute_score(docs, query, doc_id)
            ) < 1e-9


# --- hashing embedder ---------------------------------------------------------

def test_hash_embed_deterministic():
    a = hash_embed("net profit", 64)
    b = hash_embed("net profit", 64)
    assert (a == b).all()


def test_hash_embed_empty_is_zero():
    assert not hash_embed("", 64).any()
    assert not hash_embed("   ", 64).any()


def test_hash_embed_unit_norm():
    for text in ("x", "net profit", "净利润", "a b c d e"):
        v = hash_embed(text, 32)
        assert abs(float(v @ v) ** 0.5 - 1.0) < 1e-9


def test_hash_embed_dimension_guard():
    with pytest.raises(ValueError):
        hash_embed("x", 4)


def test_hash_embed_whitespace_invariance():
    a = hash_embed("net profit", 64)
    b = hash_embed("  net \t profit ", 64)
    assert (a == b).all()


# --- routing ---------------------------------------------------------------------

def test_route_desk_query(desk_catalog):
    query = "net profit 2020 Company XXX"
    assert route_by_retrieval("bm25", desk_catalog, query) == "FIN001"
    assert route_by_retrieval(HashingEmbedder(256), desk_catalog, query) == "FIN001"


def test_route_single_api_catalog(desk_catalog):
    solo = ApiCatalog(apis=(desk_catalog.get("LAW001"),))
    assert route_by_retrieval("bm25", solo, "anything at all") == "LAW001"


def test_route_alias_only_query_fails(synth_catalog):
    # the learned abbreviation is absent from the indexed documents, so the
    # lexical router cannot do better than an arbitrary pick
    router = Bm25Router(synth_catalog)
    assert router.route('DLMX "Kestrel Dynamics" 2018') != "API002"


def test_route_empty_catalog_rejected():
    with pytest.raises(EmptyCorpus):
        Bm25Router(ApiCatalog(apis=()))
    with pytest.raises(EmptyCorpus):
        DenseRouter(ApiCatalog(apis=()), HashingEmbedder())


def test_dense_router_whitespace_invariance(synth_catalog):
    router = DenseRouter(synth_catalog, HashingEmbedder(128))
    assert router.route("domestic revenue 2020") == router.route(" domestic   revenue  2020 ")
