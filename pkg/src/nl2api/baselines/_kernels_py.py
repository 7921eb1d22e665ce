"""Pure-Python kernels: the fallback twin of _kernels.pyx.

Both implementations must perform the same floating-point operations in the
same order so their outputs agree bit-for-bit; keep them in sync.
"""

from __future__ import annotations

IMPLEMENTATION = "python"

_FNV_OFFSET = 14695981039346656037
_FNV_PRIME = 1099511628211
_MASK64 = (1 << 64) - 1


def fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & _MASK64
    return h


def accumulate_ngrams(text: str, d: int, vec) -> int:
    """Add the signed hash of every 2- and 3-char ngram of text into vec.

    Returns the number of ngrams accumulated. vec is a float64 buffer of
    length d; bucket = hash % d, sign from the hash's top bit.
    """
    count = 0
    n_chars = len(text)
    for n in (2, 3):
        for i in range(n_chars - n + 1):
            h = fnv1a64(text[i : i + n].encode("utf-8"))
            sign = -1.0 if (h >> 63) & 1 else 1.0
            vec[h % d] += sign
            count += 1
    return count


def bm25_accumulate(doc_idx, tfs, idf: float, k1: float, norms, scores) -> None:
    """Add one query term's contribution to every posting's document score.

    norms[j] is the precomputed length normalizer k1 * (1 - b + b*len/avgdl)
    for document j; doc_idx/tfs are that term's postings.
    """
    k1p1 = k1 + 1.0
    for p in range(len(doc_idx)):
        j = doc_idx[p]
        tf = tfs[p]
        scores[j] += idf * (tf * k1p1) / (tf + norms[j])
