"""Domain types, voting semantics, and the persistent corpus store."""

from geomove.corpus.catalog import EntityTypeCatalog
from geomove.corpus.store import CorpusState, CorpusStore
from geomove.corpus.types import (
    AgreementStatus,
    CharSpan,
    Decision,
    Document,
    IngestStatus,
    IterationRecord,
    Label,
    ModelVote,
    Origin,
    PlaceMention,
    PoolStatus,
    Statement,
    Vote,
    statement_id_for,
)
from geomove.corpus.voting import AgreementSummary, agreement_summary, resolve_agreement

__all__ = [
    "AgreementStatus",
    "AgreementSummary",
    "CharSpan",
    "CorpusState",
    "CorpusStore",
    "Decision",
    "Document",
    "EntityTypeCatalog",
    "IngestStatus",
    "IterationRecord",
    "Label",
    "ModelVote",
    "Origin",
    "PlaceMention",
    "PoolStatus",
    "Statement",
    "Vote",
    "agreement_summary",
    "resolve_agreement",
    "statement_id_for",
]
