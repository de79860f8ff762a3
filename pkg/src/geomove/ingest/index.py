"""In-memory inverted index with tf-idf ranking over the document pool.

Index tokens are case-folded so queries behave like ordinary full-text
search (classification features elsewhere never lowercase; this index is
a retrieval aid, not a feature source).  Ranking is the sum of
tf * idf over query terms with the same smoothed idf the feature module
uses: ln((1 + n) / (1 + df)) + 1.
"""

from __future__ import annotations

import math
import re
from bisect import insort
from typing import Iterable

from geomove.corpus.types import Document, IngestStatus

_TOKEN = re.compile(r"[\w'’\-]+", re.UNICODE)

_INDEXABLE = {IngestStatus.TAGGED, IngestStatus.FILTERED_IN, IngestStatus.FILTERED_OUT}


def index_tokens(text: str) -> list[str]:
    return [t.casefold() for t in _TOKEN.findall(text)]


class InvertedIndex:
    def __init__(self):
        # token -> sorted list of (doc_id, term frequency)
        self._postings: dict[str, list[tuple[str, int]]] = {}
        self._doc_token_counts: dict[str, int] = {}

    @property
    def doc_count(self) -> int:
        return len(self._doc_token_counts)

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._doc_token_counts

    def add(self, doc: Document) -> None:
        """Index one Tagged document; re-adding the same id is a no-op."""
        if doc.ingest_status not in _INDEXABLE:
            raise ValueError(f"document {doc.doc_id} is not tagged yet ({doc.ingest_status})")
        if doc.doc_id in self._doc_token_counts:
            return
        tokens = index_tokens(doc.extracted_text)
        self._doc_token_counts[doc.doc_id] = len(tokens)
        tf: dict[str, int] = {}
        for token in tokens:
            tf[token] = tf.get(token, 0) + 1
        for token, count in tf.items():
            insort(self._postings.setdefault(token, []), (doc.doc_id, count))

    def idf(self, token: str) -> float:
        df = len(self._postings.get(token, ()))
        return math.log((1 + self.doc_count) / (1 + df)) + 1.0

    def search(
        self, query: Iterable[str], require_all: bool = False
    ) -> list[tuple[str, float]]:
        """Rank documents by summed tf-idf of the query terms.

        Returns (doc_id, score) pairs, best first; ties break on doc_id.
        With ``require_all`` only documents containing every query term
        qualify.  An empty query returns no results.
        """
        terms = [t.casefold() for t in query]
        if not terms:
            return []
        scores: dict[str, float] = {}
        seen_terms: dict[str, set[str]] = {}
        for term in terms:
            idf = self.idf(term)
            for doc_id, tf in self._postings.get(term, ()):
                scores[doc_id] = scores.get(doc_id, 0.0) + tf * idf
                seen_terms.setdefault(doc_id, set()).add(term)
        if require_all:
            needed = set(terms)
            scores = {d: s for d, s in scores.items() if seen_terms[d] >= needed}
        return sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
