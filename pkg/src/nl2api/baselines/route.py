"""Retrieval-based query routing: map a query straight to a top-1 api_id.

These are the comparison baselines. Each API is flattened into one document
(display name, description, aliases, argument names and meanings); a query
is routed to the best-scoring document's api_id. Retrieval baselines cannot
fill arguments or refuse vague queries, which is exactly the gap the
two-stage pipeline is meant to close.
"""

from __future__ import annotations

import numpy as np

from ..catalog import ApiCatalog, ApiSpec
from ..errors import EmptyCorpus
from .bm25 import Bm25Index, bm25_scores_all, build_bm25_index
from .embed import EmbeddingProvider


def api_document(spec: ApiSpec) -> str:
    parts = [spec.display_name, spec.description, *spec.aliases]
    for arg in (*spec.inputs, *spec.outputs):
        parts.append(arg.name)
        if arg.meaning:
            parts.append(arg.meaning)
    return " ".join(p for p in parts if p)


def catalog_documents(catalog: ApiCatalog) -> list[tuple[str, str]]:
    return [(api.api_id, api_document(api)) for api in catalog.apis]


class Bm25Router:
    name = "bm25"

    def __init__(self, catalog: ApiCatalog, k1: float = 1.2, b: float = 0.75):
        if len(catalog) == 0:
            raise EmptyCorpus("catalog has no APIs to index")
        self.index: Bm25Index = build_bm25_index(catalog_documents(catalog), k1=k1, b=b)

    def route(self, query: str) -> str:
        scores = bm25_scores_all(self.index, query)
        return self.index.doc_ids[int(np.argmax(scores))]


class DenseRouter:
    name = "dense"

    def __init__(self, catalog: ApiCatalog, provider: EmbeddingProvider):
        if len(catalog) == 0:
            raise EmptyCorpus("catalog has no APIs to index")
        self.provider = provider
        self.doc_ids = tuple(api.api_id for api in catalog.apis)
        self.doc_matrix = np.stack(
            [np.asarray(provider.embed(text), dtype=np.float64) for _, text in catalog_documents(catalog)]
        )

    def route(self, query: str) -> str:
        q = np.asarray(self.provider.embed(query), dtype=np.float64)
        sims = self.doc_matrix @ q
        return self.doc_ids[int(np.argmax(sims))]


def route_by_retrieval(retriever, catalog: ApiCatalog, query: str) -> str:
    """Top-1 routing. retriever is "bm25", an EmbeddingProvider, or any
    object with a route(query) method (ties go to catalog order)."""
    if isinstance(retriever, str):
        if retriever != "bm25":
            raise ValueError(f"unknown retriever {retriever!r}")
        return Bm25Router(catalog).route(query)
    if hasattr(retriever, "route"):
        return retriever.route(query)
    if isinstance(retriever, EmbeddingProvider):
        return DenseRouter(catalog, retriever).route(query)
    raise TypeError(f"unsupported retriever: {retriever!r}")
