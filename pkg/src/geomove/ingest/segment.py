"""Rule-based sentence segmentation.

A boundary is a run of '.', '!' or '?' followed by whitespace and then a
capital letter; a '.' is not a boundary when the word before it is on the
abbreviation stop-list.  Spans cover exactly the non-whitespace text:
each sentence starts and ends on a non-whitespace character, and the gaps
between consecutive spans are pure whitespace.
"""

from __future__ import annotations

import re
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

from geomove.corpus.types import CharSpan

_SENT_PUNCT = ".!?"
_WORD_BEFORE = re.compile(r"([\w'’\-]+)$", re.UNICODE)


def load_abbreviations(path: Optional[str | Path] = None) -> frozenset[str]:
    """Stop-list file: one token per line, '#' comments allowed."""
    if path is None:
        text = resources.files("geomove.data").joinpath("abbreviations.txt").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    tokens = set()
    for line in text.splitlines():
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            tokens.add(stripped)
    return frozenset(tokens)


def segment_sentences(text: str, abbreviations: Iterable[str] = ()) -> list[CharSpan]:
    stoplist = frozenset(abbreviations)
    spans: list[CharSpan] = []
    n = len(text)
    i = 0

    def skip_ws(j: int) -> int:
        while j < n and text[j].isspace():
            j += 1
        return j

    start = skip_ws(0)
    if start == n:
        return []
    i = start
    while i < n:
        ch = text[i]
        if ch in _SENT_PUNCT:
            # consume the whole punctuation run ("?!", "...")
            run_end = i + 1
            while run_end < n and text[run_end] in _SENT_PUNCT:
                run_end += 1
            after = skip_ws(run_end)
            is_boundary = after > run_end and after < n and text[after].isupper()
            if is_boundary and ch == "." and run_end - i == 1:
                m = _WORD_BEFORE.search(text[:i])
                if m and m.group(1) in stoplist:
                    is_boundary = False
            if is_boundary:
                spans.append(CharSpan(start, run_end))
                start = after
                i = after
                continue
            i = run_end
            continue
        i += 1

    # final sentence: trim trailing whitespace
    end = n
    while end > start and text[end - 1].isspace():
        end -= 1
    if end > start:
        spans.append(CharSpan(start, end))
    return spans
