"""Hashing character-ngram embedder and the pluggable provider interface.

The hashing embedder is a deterministic, training-free stand-in for a dense
retrieval model: good enough to exercise the dense routing path, not a
serious semantic encoder. Real encoders plug in through EmbeddingProvider.
"""

from __future__ import annotations

from typing import Protocol, runtime_checkable

import numpy as np

from . import kernels

_BOUNDARY_START = "\x02"
_BOUNDARY_END = "\x03"


@runtime_checkable
class EmbeddingProvider(Protocol):
    dimension: int

    def embed(self, text: str) -> np.ndarray: ...


def hash_embed(text: str, d: int) -> np.ndarray:
    """Embed text into d signed-hash buckets over 2- and 3-char ngrams.

    Text is lowercased with whitespace runs collapsed, then wrapped in
    boundary sentinels so any non-empty text yields at least one ngram.
    The result is L2-normalized; only the empty text gives a zero vector.
    """
    if d < 8:
        raise ValueError(f"dimension must be >= 8, got {d}")
    vec = np.zeros(d, dtype=np.float64)
    normalized = " ".join(text.lower().split())
    if not normalized:
        return vec
    kernels.accumulate_ngrams(_BOUNDARY_START + normalized + _BOUNDARY_END, d, vec)
    norm = float(np.linalg.norm(vec))
    if norm > 0.0:
        vec /= norm
    return vec


class HashingEmbedder:
    """EmbeddingProvider backed by hash_embed."""

    def __init__(self, dimension: int = 256):
        if dimension < 8:
            raise ValueError(f"dimension must be >= 8, got {dimension}")
        self.dimension = dimension

    def embed(self, text: str) -> np.ndarray:
        return hash_embed(text, self.dimension)
