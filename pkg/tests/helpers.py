"""Shared test fixtures and small builders."""

from __future__ import annotations

from datetime import datetime, timezone

from geomove.corpus import (
    CharSpan,
    Decision,
    Document,
    IngestStatus,
    Label,
    Origin,
    Statement,
    Vote,
    statement_id_for,
)

HAWKS_SENTENCE = "Hawks migrate from Nova Scotia, through Pennsylvania, to Georgia"


def make_document(text: str = HAWKS_SENTENCE, doc_id: str = "doc_test") -> Document:
    return Document(
        doc_id=doc_id,
        source_uri="test://fixture",
        raw_content=text,
        extracted_text=text,
        sentences=(CharSpan(0, len(text)),),
        ingest_status=IngestStatus.FILTERED_IN,
    )


def make_statement(
    text: str = HAWKS_SENTENCE,
    doc_id: str = "doc_test",
    label: Label = Label.MOVEMENT,
    votes: tuple[Vote, ...] = (),
    origin: Origin = Origin.EXPERT_SEED,
) -> Statement:
    span = CharSpan(0, len(text))
    return Statement(
        statement_id=statement_id_for(doc_id, span, label),
        doc_id=doc_id,
        span=span,
        text=text,
        label=label,
        origin=origin,
        votes=votes,
    )


def votes(agree: int, disagree: int) -> tuple[Vote, ...]:
    ts = datetime(2024, 1, 1, tzinfo=timezone.utc)
    out = []
    for i in range(agree):
        out.append(Vote(worker_id=f"w_a{i}", decision=Decision.AGREE, timestamp=ts))
    for i in range(disagree):
        out.append(Vote(worker_id=f"w_d{i}", decision=Decision.DISAGREE, timestamp=ts))
    return tuple(out)
