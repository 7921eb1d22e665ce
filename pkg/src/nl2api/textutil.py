"""Shared tokenization used by the lexical baseline and the rule backend.

Unicode-lowercases, splits on any non-alphanumeric character (underscores
split too, so argument names like net_profit yield their word parts), and
appends a bigram for every pair of consecutive CJK characters so that
unsegmented CJK text still produces useful index terms.
"""

from __future__ import annotations

import re

_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)
_CJK_RUN_RE = re.compile(r"[㐀-䶿一-鿿豈-﫿]{2,}")


def tokenize(text: str) -> list[str]:
    lowered = text.lower()
    tokens = _WORD_RE.findall(lowered)
    for run in _CJK_RUN_RE.findall(lowered):
        tokens.extend(run[i : i + 2] for i in range(len(run) - 1))
    return tokens


def token_set(text: str) -> set[str]:
    return set(tokenize(text))
