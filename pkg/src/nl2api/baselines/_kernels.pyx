# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the lexical/dense retrieval hot loops.

Semantics must match _kernels_py.py exactly (same operations, same order);
the parity test in tests/test_kernels.py holds both to that.
"""

IMPLEMENTATION = "cython"

cdef unsigned long long _FNV_OFFSET = 14695981039346656037ULL
cdef unsigned long long _FNV_PRIME = 1099511628211ULL


cdef unsigned long long _fnv1a64_bytes(const unsigned char[:] data) nogil:
    cdef unsigned long long h = _FNV_OFFSET
    cdef Py_ssize_t i
    for i in range(data.shape[0]):
        h ^= data[i]
        h *= _FNV_PRIME
    return h


def fnv1a64(bytes data) -> int:
    return _fnv1a64_bytes(data)


def accumulate_ngrams(str text, int d, double[::1] vec) -> int:
    cdef int count = 0
    cdef Py_ssize_t n_chars = len(text)
    cdef Py_ssize_t i
    cdef int n
    cdef unsigned long long h
    cdef bytes encoded
    for n in (2, 3):
        for i in range(n_chars - n + 1):
            encoded = text[i : i + n].encode("utf-8")
            h = _fnv1a64_bytes(encoded)
            if (h >> 63) & 1:
                vec[h % d] -= 1.0
            else:
                vec[h % d] += 1.0
            count += 1
    return count


def bm25_accumulate(long long[::1] doc_idx, double[::1] tfs, double idf,
                    double k1, double[::1] norms, double[::1] scores):
    cdef double k1p1 = k1 + 1.0
    cdef Py_ssize_t p
    cdef long long j
    cdef double tf
    for p in range(doc_idx.shape[0]):
        j = doc_idx[p]
        tf = tfs[p]
        scores[j] += idf * (tf * k1p1) / (tf + norms[j])
