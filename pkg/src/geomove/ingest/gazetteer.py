"""Gazetteer place tagging and the multi-place document filter.

Matching is deliberately shallow: maximal (longest-match, leftmost-first,
non-overlapping) occurrences of gazetteer surface forms as whole token
sequences, case-sensitive, anchored on a capitalized first token.  That
is enough for labeling hints and the multi-place filter; toponym
disambiguation to coordinates is explicitly not attempted, so a surface
like "West Nile" inside a disease name still tags (a false positive by
design).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace as dc_replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

from geomove.corpus.types import CharSpan, Document, IngestStatus, PlaceMention

_TOKEN = re.compile(r"[^\W\d_][\w'’\-]*", re.UNICODE)


@dataclass(frozen=True)
class GazetteerEntry:
    entry_id: str
    canonical: str
    alternates: tuple[str, ...] = ()

    @property
    def surfaces(self) -> tuple[str, ...]:
        return (self.canonical,) + self.alternates


class Gazetteer:
    """Surface-form dictionary with a first-token lookup structure."""

    def __init__(self, entries: Iterable[GazetteerEntry]):
        self.entries = list(entries)
        # first token -> [(surface tokens, surface, entry_id)], longest first
        self._by_first: dict[str, list[tuple[tuple[str, ...], str, str]]] = {}
        for entry in self.entries:
            for surface in entry.surfaces:
                tokens = tuple(_TOKEN.findall(surface))
                if not tokens:
                    raise ValueError(f"gazetteer surface {surface!r} has no tokens")
                self._by_first.setdefault(tokens[0], []).append(
                    (tokens, surface, entry.entry_id)
                )
        for options in self._by_first.values():
            options.sort(key=lambda t: (-len(t[0]), t[1]))

    def __len__(self) -> int:
        return len(self.entries)

    @classmethod
    def from_tsv(cls, path: Optional[str | Path] = None) -> "Gazetteer":
        """TSV columns: entry_id, canonical_name, pipe-separated alternates."""
        if path is None:
            text = resources.files("geomove.data").joinpath("gazetteer.tsv").read_text("utf-8")
        else:
            text = Path(path).read_text(encoding="utf-8")
        entries = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) < 2:
                raise ValueError(f"gazetteer line {lineno}: need entry_id<TAB>canonical")
            alternates = tuple(a for a in parts[2].split("|") if a) if len(parts) > 2 else ()
            entries.append(GazetteerEntry(parts[0], parts[1], alternates))
        return cls(entries)


def tag_places(doc: Document, gaz: Gazetteer) -> Document:
    """Tag place mentions in an Extracted document; returns it Tagged.

    Scans tokens left to right; at each capitalized token the longest
    matching surface form wins and the scan resumes past it, so matches
    never overlap.
    """
    text = doc.extracted_text
    tokens = [(m.start(), m.end(), m.group(0)) for m in _TOKEN.finditer(text)]
    mentions: list[PlaceMention] = []
    i = 0
    while i < len(tokens):
        start, end, word = tokens[i]
        if not word[0].isupper():
            i += 1
            continue
        options = gaz._by_first.get(word)
        if not options:
            i += 1
            continue
        matched = None
        for surf_tokens, _surface, entry_id in options:
            k = len(surf_tokens)
            if i + k > len(tokens):
                continue
            ok = True
            for j in range(k):
                if tokens[i + j][2] != surf_tokens[j]:
                    ok = False
                    break
                if j > 0:
                    gap = text[tokens[i + j - 1][1] : tokens[i + j][0]]
                    if gap.strip() != "":
                        ok = False
                        break
            if ok:
                matched = (k, entry_id)
                break  # options are longest-first
        if matched is None:
            i += 1
            continue
        k, entry_id = matched
        span = CharSpan(tokens[i][0], tokens[i + k - 1][1])
        mentions.append(
            PlaceMention(span=span, surface=span.slice(text), gazetteer_entry_id=entry_id)
        )
        i += k
    return dc_replace(
        doc, place_mentions=tuple(mentions), ingest_status=IngestStatus.TAGGED
    )


def filter_multi_place(
    docs: Iterable[Document], min_places: int = 2
) -> tuple[list[Document], list[Document]]:
    """Partition Tagged documents by distinct mention surfaces >= min_places.

    Returns (filtered_in, filtered_out) with statuses applied.  Repeated
    mentions of one surface count once: a page that says "Georgia" five
    times is weak evidence of movement.
    """
    filtered_in, filtered_out = [], []
    for doc in docs:
        distinct = {m.surface for m in doc.place_mentions}
        if len(distinct) >= min_places:
            filtered_in.append(doc.with_status(IngestStatus.FILTERED_IN))
        else:
            filtered_out.append(doc.with_status(IngestStatus.FILTERED_OUT))
    return filtered_in, filtered_out
