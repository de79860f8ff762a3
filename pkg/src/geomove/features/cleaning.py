"""Text cleaning for classification features.

Contractions are expanded first (so the apostrophes they contain still
mean something), then every character outside letters/digits/space is
dropped and whitespace is collapsed.  Case is deliberately preserved:
place mentions are usually capitalized and that signal matters for
movement statements.
"""

from __future__ import annotations

import re
from importlib import resources
from pathlib import Path
from typing import Mapping, Optional

_APOSTROPHES = str.maketrans({"’": "'", "ʼ": "'"})


def load_contractions(path: Optional[str | Path] = None) -> dict[str, str]:
    """TSV table: contraction<TAB>expansion, '#' comments allowed."""
    if path is None:
        text = resources.files("geomove.data").joinpath("contractions.tsv").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    table = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"contractions line {lineno}: need contraction<TAB>expansion")
        table[parts[0].strip()] = parts[1].strip()
    return table


def _compile_contractions(table: Mapping[str, str]):
    if not table:
        return None, {}
    # longest first so "can't've" beats "can't"
    keys = sorted(table, key=len, reverse=True)
    pattern = re.compile(
        r"\b(" + "|".join(re.escape(k) for k in keys) + r")\b", re.IGNORECASE
    )
    lowered = {k.lower(): v for k, v in table.items()}
    return pattern, lowered


def expand_contractions(text: str, table: Mapping[str, str]) -> str:
    pattern, lowered = _compile_contractions(table)
    if pattern is None:
        return text
    normalized = text.translate(_APOSTROPHES)

    def repl(m: re.Match) -> str:
        hit = m.group(0)
        expansion = lowered[hit.lower()]
        # keep a leading capital: "Don't" -> "Do not"
        if hit[0].isupper():
            return expansion[0].upper() + expansion[1:]
        return expansion

    return pattern.sub(repl, normalized)


def clean_text(raw: str, contractions: Optional[Mapping[str, str]] = None) -> str:
    """Clean raw text to letters, digits, and single spaces.

    Idempotent: cleaning a cleaned string returns it unchanged.
    """
    text = expand_contractions(raw, contractions or {})
    # punctuation is deleted outright ("U.S.A." -> "USA"), whitespace collapsed
    kept = "".join(ch for ch in text if ch.isalnum() or ch.isspace())
    return " ".join(kept.split())


def tokenize(cleaned: str) -> list[str]:
    """Split cleaned text on single spaces; empty input gives no tokens."""
    if not cleaned:
        return []
    return cleaned.split(" ")
