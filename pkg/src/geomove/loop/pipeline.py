"""Glue between the corpus store and the iteration engine: assembling
training rows from statements, pool rows from unlabeled sentences, and
materializing reviewed candidates back into the store."""

from __future__ import annotations

from typing import Mapping, Optional

from geomove.committee import Candidate
from geomove.corpus.store import CorpusStore
from geomove.corpus.types import (
    AgreementStatus,
    CharSpan,
    IngestStatus,
    Label,
    ModelVote,
    Origin,
)
from geomove.features.cleaning import clean_text, tokenize
from geomove.features.specs import ExampleRow
from geomove.loop.engine import ReviewDecision


def _tokens(text: str, contractions: Mapping[str, str]) -> tuple[str, ...]:
    return tuple(tokenize(clean_text(text, contractions)))


def corpus_rows_from_store(
    store: CorpusStore,
    contractions: Mapping[str, str],
    undecided_policy: str = "exclude",
) -> list[ExampleRow]:
    """Training rows from live statements.

    Crowd-undecided statements are handled per policy: "exclude" drops
    them from training (they stay in exports), "as-positive" and
    "as-negative" force a label.
    """
    rows = []
    for stmt in store.statements():
        label = 1 if stmt.label is Label.MOVEMENT else 0
        if stmt.agreement is AgreementStatus.UNDECIDED:
            if undecided_policy == "exclude":
                continue
            if undecided_policy == "as-positive":
                label = 1
            elif undecided_policy == "as-negative":
                label = 0
            else:
                raise ValueError(f"unknown undecided policy {undecided_policy!r}")
        rows.append(
            ExampleRow(
                statement_id=stmt.statement_id,
                tokens=_tokens(stmt.text, contractions),
                label=label,
                doc_id=stmt.doc_id,
                span=(stmt.span.start, stmt.span.end),
                text=stmt.text,
            )
        )
    return rows


def pool_row_id(doc_id: str, start: int, end: int) -> str:
    return f"{doc_id}:{start}-{end}"


def pool_rows_from_store(
    store: CorpusStore, contractions: Mapping[str, str]
) -> list[ExampleRow]:
    """Unlabeled candidate sentences of Filtered-In documents.

    A sentence leaves the pool once a live statement covers its exact
    span (reviewed candidates and hand labels both count).
    """
    claimed = {(s.doc_id, s.span.start, s.span.end) for s in store.statements()}
    rows = []
    for doc in store.documents():
        if doc.ingest_status is not IngestStatus.FILTERED_IN:
            continue
        for span in doc.sentences:
            if (doc.doc_id, span.start, span.end) in claimed:
                continue
            text = span.slice(doc.extracted_text)
            rows.append(
                ExampleRow(
                    statement_id=pool_row_id(doc.doc_id, span.start, span.end),
                    tokens=_tokens(text, contractions),
                    doc_id=doc.doc_id,
                    span=(span.start, span.end),
                    text=text,
                )
            )
    rows.sort(key=lambda r: r.statement_id)
    return rows


def store_materializer(store: CorpusStore, entity_fallback: Optional[str] = None):
    """Materializer that persists each reviewed candidate as a statement."""

    def materialize(candidate: Candidate, decision: ReviewDecision) -> None:
        row = candidate.row
        if row.doc_id is None or row.span is None:
            return  # synthetic rows have no document to attach to
        label = Label.MOVEMENT if decision.confirmed else Label.NOT_MOVEMENT
        store.create_statement(
            row.doc_id,
            CharSpan(*row.span),
            label=label,
            origin=Origin.MODEL_PREDICTED,
            entity_type=decision.entity_type or (entity_fallback if decision.confirmed else None),
            mean_probability=candidate.mean_prob,
            model_votes={
                combo_id: ModelVote(
                    label=Label.MOVEMENT if candidate.member_classes[combo_id] else Label.NOT_MOVEMENT,
                    probability=prob,
                )
                for combo_id, prob in candidate.member_probs.items()
            },
        )

    return materialize
