"""Okapi BM25 over an inverted index.

Defaults k1=1.2, b=0.75. IDF uses the +1-smoothed form
ln((N - df + 0.5) / (df + 0.5) + 1), which is non-negative for any df <= N;
with a corpus of only a few dozen API documents the unsmoothed form would
assign negative weight to common terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import EmptyCorpus, UnknownDocId
from ..textutil import tokenize
from . import kernels


@dataclass
class Bm25Index:
    doc_ids: tuple[str, ...]
    term_freqs: tuple[dict[str, int], ...]
    doc_freqs: dict[str, int]
    doc_lens: tuple[int, ...]
    avgdl: float
    n_docs: int
    k1: float
    b: float
    _doc_index: dict[str, int] = field(repr=False, default_factory=dict)
    _norms: np.ndarray = field(repr=False, default=None)
    _postings: dict[str, tuple[np.ndarray, np.ndarray]] = field(repr=False, default_factory=dict)

    def idf(self, term: str) -> float:
        df = self.doc_freqs.get(term, 0)
        return math.log((self.n_docs - df + 0.5) / (df + 0.5) + 1.0)

    def to_obj(self) -> dict:
        """JSON-friendly dump (the `index` CLI sidecar format)."""
        return {
            "k1": self.k1,
            "b": self.b,
            "n_docs": self.n_docs,
            "avgdl": self.avgdl,
            "doc_ids": list(self.doc_ids),
            "doc_lens": list(self.doc_lens),
            "doc_freqs": dict(sorted(self.doc_freqs.items())),
            "term_freqs": [dict(sorted(tf.items())) for tf in self.term_freqs],
        }


def build_bm25_index(
    docs: Sequence[tuple[str, str]], k1: float = 1.2, b: float = 0.75
) -> Bm25Index:
    """Index (doc_id, text) pairs. Raises EmptyCorpus for an empty input."""
    if not docs:
        raise EmptyCorpus("cannot index an empty corpus")
    if k1 <= 0:
        raise ValueError(f"k1 must be positive, got {k1}")
    if not 0.0 <= b <= 1.0:
        raise ValueError(f"b must be in [0, 1], got {b}")

    doc_ids = []
    term_freqs = []
    doc_lens = []
    for doc_id, text in docs:
        tokens = tokenize(text)
        freqs: dict[str, int] = {}
        for t in tokens:
            freqs[t] = freqs.get(t, 0) + 1
        doc_ids.append(doc_id)
        term_freqs.append(freqs)
        doc_lens.append(len(tokens))

    doc_freqs: dict[str, int] = {}
    for freqs in term_freqs:
        for t in freqs:
            doc_freqs[t] = doc_freqs.get(t, 0) + 1

    n = len(doc_ids)
    avgdl = sum(doc_lens) / n
    index = Bm25Index(
        doc_ids=tuple(doc_ids),
        term_freqs=tuple(term_freqs),
        doc_freqs=doc_freqs,
        doc_lens=tuple(doc_lens),
        avgdl=avgdl,
        n_docs=n,
        k1=k1,
        b=b,
    )
    index._doc_index = {d: i for i, d in enumerate(doc_ids)}
    if avgdl > 0:
        norms = [k1 * (1.0 - b + b * dl / avgdl) for dl in doc_lens]
    else:
        norms = [k1] * n
    index._norms = np.asarray(norms, dtype=np.float64)
    postings_idx: dict[str, list[int]] = {}
    for i, freqs in enumerate(term_freqs):
        for t in freqs:
            postings_idx.setdefault(t, []).append(i)
    index._postings = {
        t: (
            np.asarray(idxs, dtype=np.int64),
            np.asarray([term_freqs[i][t] for i in idxs], dtype=np.float64),
        )
        for t, idxs in postings_idx.items()
    }
    return index


def bm25_score(index: Bm25Index, query: str, doc_id: str) -> float:
    """Okapi score of one document; query terms absent from it contribute 0.

    Query term frequency is handled by summing once per occurrence, so a
    repeated query term can only increase the score.
    """
    try:
        di = index._doc_index[doc_id]
    except KeyError:
        raise UnknownDocId(f"document {doc_id!r} is not in the index") from None
    freqs = index.term_freqs[di]
    norm = float(index._norms[di])
    k1p1 = index.k1 + 1.0
    score = 0.0
    for t in tokenize(query):
        tf = freqs.get(t)
        if tf is None:
            continue
        score += index.idf(t) * (tf * k1p1) / (tf + norm)
    return score


def bm25_scores_all(index: Bm25Index, query: str) -> np.ndarray:
    """Scores for every document, via the postings-walk kernel."""
    scores = np.zeros(index.n_docs, dtype=np.float64)
    for t in tokenize(query):
        postings = index._postings.get(t)
        if postings is None:
            continue
        doc_idx, tfs = postings
        kernels.bm25_accumulate(doc_idx, tfs, index.idf(t), index.k1, index._norms, scores)
    return scores


def bm25_rank(index: Bm25Index, query: str, k: int) -> list[tuple[str, float]]:
    """Top-k (doc_id, score) by descending score, ties by insertion order."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    scores = bm25_scores_all(index, query)
    order = sorted(range(index.n_docs), key=lambda i: (-scores[i], i))
    return [(index.doc_ids[i], float(scores[i])) for i in order[:k]]
