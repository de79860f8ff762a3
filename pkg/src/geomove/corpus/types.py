"""Core domain types for the movement-statement corpus.

All types are immutable values (frozen dataclasses); state transitions
produce new instances.  Character offsets are everywhere counted in
Unicode scalar values, i.e. Python string indices, and every span is
half-open ``[start, end)``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace
from datetime import datetime
from enum import Enum
from typing import Mapping, Optional

from geomove.errors import SpanOutOfRangeError


class IngestStatus(Enum):
    FETCHED = "Fetched"
    EXTRACTED = "Extracted"
    TAGGED = "Tagged"
    FILTERED_IN = "Filtered-In"
    FILTERED_OUT = "Filtered-Out"


class PoolStatus(Enum):
    UNSEEN = "Unseen"
    IN_CORPUS = "InCorpus"


class Label(Enum):
    MOVEMENT = "Movement"
    NOT_MOVEMENT = "NotMovement"


class Origin(Enum):
    EXPERT_SEED = "ExpertSeed"
    MODEL_PREDICTED = "ModelPredicted"
    RANDOM_NEGATIVE = "RandomNegative"


class Decision(Enum):
    AGREE = "Agree"
    DISAGREE = "Disagree"


class AgreementStatus(Enum):
    AGREED = "Agreed"
    DISAGREED = "Disagreed"
    UNDECIDED = "Undecided"
    UNVOTED = "Unvoted"


@dataclass(frozen=True, order=True)
class CharSpan:
    """Half-open character span; must be non-empty and non-negative."""

    start: int
    end: int

    def __post_init__(self):
        if not (0 <= self.start < self.end):
            raise SpanOutOfRangeError(
                f"span-out-of-range: need 0 <= start < end, got [{self.start}, {self.end})"
            )

    def __len__(self) -> int:
        return self.end - self.start

    def slice(self, text: str) -> str:
        return text[self.start : self.end]

    def within(self, text: str) -> bool:
        return self.end <= len(text)

    def to_dict(self) -> dict:
        return {"start": self.start, "end": self.end}

    @staticmethod
    def from_dict(d: Mapping) -> "CharSpan":
        return CharSpan(int(d["start"]), int(d["end"]))


@dataclass(frozen=True)
class PlaceMention:
    """A gazetteer hit: ``surface`` is the document text sliced by ``span``."""

    span: CharSpan
    surface: str
    gazetteer_entry_id: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "span": self.span.to_dict(),
            "surface": self.surface,
            "gazetteer_entry_id": self.gazetteer_entry_id,
        }

    @staticmethod
    def from_dict(d: Mapping) -> "PlaceMention":
        return PlaceMention(
            span=CharSpan.from_dict(d["span"]),
            surface=d["surface"],
            gazetteer_entry_id=d.get("gazetteer_entry_id"),
        )


@dataclass(frozen=True)
class Document:
    """An ingested text with extracted content, sentence spans, and place tags.

    Invariants enforced at construction: every sentence and mention span
    lies within ``extracted_text`` and sentence spans are sorted and
    non-overlapping.  The multi-place condition behind ``FILTERED_IN`` is
    checked by the filter operation (it depends on configuration).
    """

    doc_id: str
    source_uri: str
    raw_content: str
    media: str = "plain"
    extracted_text: str = ""
    sentences: tuple[CharSpan, ...] = ()
    place_mentions: tuple[PlaceMention, ...] = ()
    ingest_status: IngestStatus = IngestStatus.FETCHED
    pool_status: PoolStatus = PoolStatus.UNSEEN

    def __post_init__(self):
        n = len(self.extracted_text)
        prev_end = 0
        for span in self.sentences:
            if span.end > n:
                raise SpanOutOfRangeError(
                    f"sentence span [{span.start}, {span.end}) outside text of length {n}"
                )
            if span.start < prev_end:
                raise ValueError("sentence spans must be sorted and non-overlapping")
            prev_end = span.end
        for mention in self.place_mentions:
            if mention.span.end > n:
                raise SpanOutOfRangeError(
                    f"mention span [{mention.span.start}, {mention.span.end}) outside text"
                )

    def with_status(self, status: IngestStatus) -> "Document":
        return replace(self, ingest_status=status)

    def sentence_text(self, i: int) -> str:
        return self.sentences[i].slice(self.extracted_text)

    def to_dict(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "source_uri": self.source_uri,
            "raw_content": self.raw_content,
            "media": self.media,
            "extracted_text": self.extracted_text,
            "sentences": [s.to_dict() for s in self.sentences],
            "place_mentions": [m.to_dict() for m in self.place_mentions],
            "ingest_status": self.ingest_status.value,
            "pool_status": self.pool_status.value,
        }

    @staticmethod
    def from_dict(d: Mapping) -> "Document":
        return Document(
            doc_id=d["doc_id"],
            source_uri=d["source_uri"],
            raw_content=d["raw_content"],
            media=d.get("media", "plain"),
            extracted_text=d["extracted_text"],
            sentences=tuple(CharSpan.from_dict(s) for s in d["sentences"]),
            place_mentions=tuple(PlaceMention.from_dict(m) for m in d["place_mentions"]),
            ingest_status=IngestStatus(d["ingest_status"]),
            pool_status=PoolStatus(d["pool_status"]),
        )


@dataclass(frozen=True)
class Vote:
    worker_id: str
    decision: Decision
    timestamp: datetime

    def to_dict(self) -> dict:
        return {
            "worker_id": self.worker_id,
            "decision": self.decision.value,
            "timestamp": self.timestamp.isoformat(),
        }

    @staticmethod
    def from_dict(d: Mapping) -> "Vote":
        return Vote(
            worker_id=d["worker_id"],
            decision=Decision(d["decision"]),
            timestamp=datetime.fromisoformat(d["timestamp"]),
        )


@dataclass(frozen=True)
class ModelVote:
    """One committee member's prediction on a statement."""

    label: Label
    probability: float

    def to_dict(self) -> dict:
        return {"label": self.label.value, "probability": self.probability}

    @staticmethod
    def from_dict(d: Mapping) -> "ModelVote":
        return ModelVote(Label(d["label"]), float(d["probability"]))


def statement_id_for(doc_id: str, span: CharSpan, label: Label) -> str:
    """Deterministic statement id from the duplicate key (doc, span, label)."""
    key = f"{doc_id}|{span.start}|{span.end}|{label.value}".encode("utf-8")
    return "st_" + hashlib.sha1(key).hexdigest()[:16]


@dataclass(frozen=True)
class Statement:
    """A labeled character span of a document.

    ``agreement`` is not stored: it is always derived from ``votes`` via
    :func:`geomove.corpus.voting.resolve_agreement`, so it cannot drift.
    """

    statement_id: str
    doc_id: str
    span: CharSpan
    text: str
    label: Label
    origin: Origin
    entity_type: Optional[str] = None
    mean_probability: Optional[float] = None
    model_votes: Optional[Mapping[str, ModelVote]] = None
    votes: tuple[Vote, ...] = ()

    def __post_init__(self):
        if self.origin is Origin.MODEL_PREDICTED:
            if self.mean_probability is None or self.model_votes is None:
                raise ValueError(
                    "model-predicted statements must carry mean_probability and model_votes"
                )
        if self.mean_probability is not None and not (0.0 <= self.mean_probability <= 1.0):
            raise ValueError(f"mean_probability {self.mean_probability} outside [0, 1]")
        seen = set()
        for vote in self.votes:
            if vote.worker_id in seen:
                raise ValueError(f"worker {vote.worker_id} voted twice")
            seen.add(vote.worker_id)

    @property
    def agreement(self) -> AgreementStatus:
        from geomove.corpus.voting import resolve_agreement

        return resolve_agreement(self.votes)

    def with_vote(self, vote: Vote) -> "Statement":
        return replace(self, votes=self.votes + (vote,))

    def to_dict(self) -> dict:
        return {
            "statement_id": self.statement_id,
            "doc_id": self.doc_id,
            "span": self.span.to_dict(),
            "text": self.text,
            "label": self.label.value,
            "origin": self.origin.value,
            "entity_type": self.entity_type,
            "mean_probability": self.mean_probability,
            "model_votes": (
                None
                if self.model_votes is None
                else {k: v.to_dict() for k, v in sorted(self.model_votes.items())}
            ),
            "votes": [v.to_dict() for v in self.votes],
            "agreement": self.agreement.value,
        }

    @staticmethod
    def from_dict(d: Mapping) -> "Statement":
        model_votes = d.get("model_votes")
        return Statement(
            statement_id=d["statement_id"],
            doc_id=d["doc_id"],
            span=CharSpan.from_dict(d["span"]),
            text=d["text"],
            label=Label(d["label"]),
            origin=Origin(d["origin"]),
            entity_type=d.get("entity_type"),
            mean_probability=d.get("mean_probability"),
            model_votes=(
                None
                if model_votes is None
                else {k: ModelVote.from_dict(v) for k, v in model_votes.items()}
            ),
            votes=tuple(Vote.from_dict(v) for v in d.get("votes", [])),
        )


@dataclass(frozen=True)
class IterationRecord:
    """One bootstrapping round, mirroring the per-iteration accounting table."""

    iter_num: int
    candidates_predicted: int
    tp: int
    fp: int
    precision: Optional[float]
    corpus_total_after: int

    def to_dict(self) -> dict:
        return {
            "iter_num": self.iter_num,
            "candidates_predicted": self.candidates_predicted,
            "tp": self.tp,
            "fp": self.fp,
            "precision": self.precision,
            "corpus_total_after": self.corpus_total_after,
        }

    @staticmethod
    def from_dict(d: Mapping) -> "IterationRecord":
        return IterationRecord(
            iter_num=int(d["iter_num"]),
            candidates_predicted=int(d["candidates_predicted"]),
            tp=int(d["tp"]),
            fp=int(d["fp"]),
            precision=d.get("precision"),
            corpus_total_after=int(d["corpus_total_after"]),
        )
