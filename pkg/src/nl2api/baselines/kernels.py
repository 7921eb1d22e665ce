"""Kernel selection: compiled extension when available, pure Python otherwise.

Set NL2API_PURE_PYTHON=1 to force the fallback (used by the parity tests and
the benchmark).
"""

from __future__ import annotations

import os

if os.environ.get("NL2API_PURE_PYTHON") == "1":
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

IMPLEMENTATION: str = _impl.IMPLEMENTATION
fnv1a64 = _impl.fnv1a64
accumulate_ngrams = _impl.accumulate_ngrams
bm25_accumulate = _impl.bm25_accumulate
