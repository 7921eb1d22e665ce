from .bm25 import Bm25Index, bm25_rank, bm25_score, bm25_scores_all, build_bm25_index
from .embed import EmbeddingProvider, HashingEmbedder, hash_embed
from .kernels import IMPLEMENTATION as KERNEL_IMPLEMENTATION
from .route import Bm25Router, DenseRouter, api_document, catalog_documents, route_by_retrieval

__all__ = [
    "Bm25Index",
    "Bm25Router",
    "DenseRouter",
    "EmbeddingProvider",
    "HashingEmbedder",
    "KERNEL_IMPLEMENTATION",
    "api_document",
    "bm25_rank",
    "bm25_score",
    "bm25_scores_all",
    "build_bm25_index",
    "catalog_documents",
    "hash_embed",
    "route_by_retrieval",
]
