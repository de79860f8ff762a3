"""Persistent corpus store: an append-only journal plus periodic snapshots.

Every mutation is one newline-delimited JSON record
``{"seq": n, "kind": k, "payload": {...}, "written_at": iso8601}`` with
monotonically increasing sequence numbers.  Loading replays the journal
(optionally on top of the newest snapshot) to an identical in-memory
state, which gives a full audit trail of the human loop and trivial
crash recovery.

Concurrency: single writer.  All mutations are serialized through one
lock; readers see the latest committed state.  The domain types handed
out are immutable, so no defensive copies are needed.
"""

from __future__ import annotations

import json
import threading
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Optional

from geomove.corpus.catalog import EntityTypeCatalog
from geomove.corpus.types import (
    CharSpan,
    Document,
    IngestStatus,
    IterationRecord,
    Label,
    ModelVote,
    Origin,
    PoolStatus,
    Statement,
    Vote,
    statement_id_for,
)
from geomove.errors import (
    CorruptJournalError,
    DuplicateStatementError,
    DuplicateVoteError,
    SpanOutOfRangeError,
    UnknownDocumentError,
    UnknownEntityTypeError,
    UnknownStatementError,
)

JOURNAL_NAME = "journal.ndjson"
SNAPSHOT_NAME = "snapshot.json"

KIND_DOCUMENT = "document"
KIND_DOC_STATUS = "doc_status"
KIND_STATEMENT = "statement"
KIND_VOTE = "vote"
KIND_SUPERSEDE = "supersede"
KIND_ITERATION = "iteration"


class CorpusState:
    """In-memory state the journal replays into.  Not thread-safe by itself."""

    def __init__(self):
        self.documents: dict[str, Document] = {}
        self.statements: dict[str, Statement] = {}
        self.superseded: set[str] = set()
        self.iterations: list[IterationRecord] = []

    def live_statements(self) -> list[Statement]:
        return [s for s in self.statements.values() if s.statement_id not in self.superseded]

    def apply(self, kind: str, payload: dict) -> None:
        if kind == KIND_DOCUMENT:
            doc = Document.from_dict(payload)
            self.documents[doc.doc_id] = doc
        elif kind == KIND_DOC_STATUS:
            doc = self.documents[payload["doc_id"]]
            if "ingest_status" in payload:
                doc = doc.with_status(IngestStatus(payload["ingest_status"]))
            if "pool_status" in payload:
                from dataclasses import replace

                doc = replace(doc, pool_status=PoolStatus(payload["pool_status"]))
            self.documents[doc.doc_id] = doc
        elif kind == KIND_STATEMENT:
            stmt = Statement.from_dict(payload)
            self.statements[stmt.statement_id] = stmt
            self.superseded.discard(stmt.statement_id)  # re-creation revives the key
        elif kind == KIND_VOTE:
            stmt = self.statements[payload["statement_id"]]
            self.statements[stmt.statement_id] = stmt.with_vote(Vote.from_dict(payload["vote"]))
        elif kind == KIND_SUPERSEDE:
            self.superseded.add(payload["statement_id"])
        elif kind == KIND_ITERATION:
            self.iterations.append(IterationRecord.from_dict(payload))
        else:
            raise ValueError(f"unknown journal record kind {kind!r}")

    def snapshot_dict(self, last_seq: int) -> dict:
        return {
            "last_seq": last_seq,
            "documents": [d.to_dict() for d in self.documents.values()],
            "statements": [s.to_dict() for s in self.statements.values()],
            "superseded": sorted(self.superseded),
            "iterations": [r.to_dict() for r in self.iterations],
        }

    @staticmethod
    def from_snapshot_dict(d: dict) -> "CorpusState":
        state = CorpusState()
        for doc in d["documents"]:
            state.documents[doc["doc_id"]] = Document.from_dict(doc)
        for stmt in d["statements"]:
            state.statements[stmt["statement_id"]] = Statement.from_dict(stmt)
        state.superseded = set(d["superseded"])
        state.iterations = [IterationRecord.from_dict(r) for r in d["iterations"]]
        return state


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


class CorpusStore:
    """Single-writer store over a journal directory.

    ``CorpusStore(path)`` opens (creating if needed) the directory and
    replays any existing snapshot + journal.  All mutating methods
    validate, append one journal record, then apply it to memory, so the
    on-disk journal is always at least as new as the in-memory state.
    """

    def __init__(self, root: str | Path, clock: Callable[[], str] = _now_iso):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._journal_path = self.root / JOURNAL_NAME
        self._snapshot_path = self.root / SNAPSHOT_NAME
        self._lock = threading.RLock()
        self._clock = clock
        self._state = CorpusState()
        self._seq = 0
        self._replay()

    # -- persistence ------------------------------------------------------

    def _replay(self) -> None:
        base_seq = 0
        if self._snapshot_path.exists():
            snap = json.loads(self._snapshot_path.read_text(encoding="utf-8"))
            self._state = CorpusState.from_snapshot_dict(snap)
            base_seq = snap["last_seq"]
        self._seq = base_seq
        if not self._journal_path.exists():
            return
        with self._journal_path.open("r", encoding="utf-8") as fh:
            for line in fh:
                if line.strip() == "":
                    continue
                try:
                    record = json.loads(line)
                    seq = record["seq"]
                    kind = record["kind"]
                    payload = record["payload"]
                except (json.JSONDecodeError, KeyError, TypeError) as exc:
                    raise CorruptJournalError(
                        f"corrupt-journal: unreadable record: {exc}", self._seq
                    ) from exc
                if seq <= base_seq:
                    continue  # already folded into the snapshot
                if seq != self._seq + 1:
                    raise CorruptJournalError(
                        f"corrupt-journal: expected seq {self._seq + 1}, found {seq}",
                        self._seq,
                    )
                self._state.apply(kind, payload)
                self._seq = seq

    def _append(self, kind: str, payload: dict) -> int:
        record = {
            "seq": self._seq + 1,
            "kind": kind,
            "payload": payload,
            "written_at": self._clock(),
        }
        line = json.dumps(record, ensure_ascii=False, sort_keys=True)
        with self._journal_path.open("a", encoding="utf-8") as fh:
            fh.write(line + "\n")
        self._state.apply(kind, payload)
        self._seq += 1
        return self._seq

    def write_snapshot(self) -> Path:
        """Fold the current state into a snapshot file; journal stays intact."""
        with self._lock:
            tmp = self._snapshot_path.with_suffix(".tmp")
            tmp.write_text(
                json.dumps(self._state.snapshot_dict(self._seq), ensure_ascii=False),
                encoding="utf-8",
            )
            tmp.replace(self._snapshot_path)
            return self._snapshot_path

    @property
    def last_seq(self) -> int:
        return self._seq

    # -- documents --------------------------------------------------------

    def add_document(self, doc: Document) -> Document:
        with self._lock:
            existing = self._state.documents.get(doc.doc_id)
            if existing is not None:
                return existing  # content-hash dedup
            self._append(KIND_DOCUMENT, doc.to_dict())
            return doc

    def set_document_status(
        self,
        doc_id: str,
        ingest_status: Optional[IngestStatus] = None,
        pool_status: Optional[PoolStatus] = None,
    ) -> Document:
        with self._lock:
            if doc_id not in self._state.documents:
                raise UnknownDocumentError(doc_id)
            payload: dict = {"doc_id": doc_id}
            if ingest_status is not None:
                payload["ingest_status"] = ingest_status.value
            if pool_status is not None:
                payload["pool_status"] = pool_status.value
            self._append(KIND_DOC_STATUS, payload)
            return self._state.documents[doc_id]

    def get_document(self, doc_id: str) -> Document:
        with self._lock:
            try:
                return self._state.documents[doc_id]
            except KeyError:
                raise UnknownDocumentError(doc_id) from None

    def documents(self) -> list[Document]:
        with self._lock:
            return list(self._state.documents.values())

    # -- statements ---------------------------------------------------------

    def create_statement(
        self,
        doc: Document | str,
        span: CharSpan,
        label: Label,
        origin: Origin,
        entity_type: Optional[str] = None,
        catalog: Optional[EntityTypeCatalog] = None,
        mean_probability: Optional[float] = None,
        model_votes: Optional[dict[str, ModelVote]] = None,
    ) -> Statement:
        """Create and persist a statement over a span of a stored document.

        The statement text is materialized from the span.  Raises
        SpanOutOfRangeError when the span falls outside the document's
        extracted text, UnknownEntityTypeError when a catalog is given
        and the entity type is not in it, and DuplicateStatementError
        when a live statement with the same (doc, span, label) exists.
        """
        with self._lock:
            if isinstance(doc, str):
                doc = self.get_document(doc)
            elif doc.doc_id not in self._state.documents:
                self.add_document(doc)
            if not span.within(doc.extracted_text):
                raise SpanOutOfRangeError(
                    f"span-out-of-range: [{span.start}, {span.end}) outside document "
                    f"{doc.doc_id} of length {len(doc.extracted_text)}"
                )
            if entity_type is not None and catalog is not None and entity_type not in catalog:
                raise UnknownEntityTypeError(entity_type)
            statement_id = statement_id_for(doc.doc_id, span, label)
            if statement_id in self._state.statements and statement_id not in self._state.superseded:
                raise DuplicateStatementError(
                    f"duplicate statement for ({doc.doc_id}, {span.start}, {span.end}, {label.value})"
                )
            stmt = Statement(
                statement_id=statement_id,
                doc_id=doc.doc_id,
                span=span,
                text=span.slice(doc.extracted_text),
                label=label,
                origin=origin,
                entity_type=entity_type,
                mean_probability=mean_probability,
                model_votes=model_votes,
            )
            self._append(KIND_STATEMENT, stmt.to_dict())
            if doc.pool_status is not PoolStatus.IN_CORPUS:
                self.set_document_status(doc.doc_id, pool_status=PoolStatus.IN_CORPUS)
            return stmt

    def import_statement(self, stmt: Statement) -> Statement:
        """Persist an externally built statement verbatim (corpus import)."""
        with self._lock:
            if (
                stmt.statement_id in self._state.statements
                and stmt.statement_id not in self._state.superseded
            ):
                raise DuplicateStatementError(stmt.statement_id)
            self._append(KIND_STATEMENT, stmt.to_dict())
            return stmt

    def cast_vote(
        self,
        statement_id: str,
        worker_id: str,
        decision,
        timestamp: Optional[datetime] = None,
    ) -> Statement:
        with self._lock:
            stmt = self.get_statement(statement_id)
            if any(v.worker_id == worker_id for v in stmt.votes):
                raise DuplicateVoteError(f"{worker_id} already voted on {statement_id}")
            vote = Vote(
                worker_id=worker_id,
                decision=decision,
                timestamp=timestamp or datetime.now(timezone.utc),
            )
            self._append(KIND_VOTE, {"statement_id": statement_id, "vote": vote.to_dict()})
            return self._state.statements[statement_id]

    def supersede_statement(self, statement_id: str, reason: str = "") -> None:
        with self._lock:
            self.get_statement(statement_id)
            self._append(KIND_SUPERSEDE, {"statement_id": statement_id, "reason": reason})

    def get_statement(self, statement_id: str) -> Statement:
        with self._lock:
            try:
                return self._state.statements[statement_id]
            except KeyError:
                raise UnknownStatementError(statement_id) from None

    def statements(self, include_superseded: bool = False) -> list[Statement]:
        with self._lock:
            if include_superseded:
                return list(self._state.statements.values())
            return self._state.live_statements()

    # -- iterations ---------------------------------------------------------

    def record_iteration(self, record: IterationRecord) -> None:
        with self._lock:
            self._append(KIND_ITERATION, record.to_dict())

    def iterations(self) -> list[IterationRecord]:
        with self._lock:
            return list(self._state.iterations)

    # -- integrity ----------------------------------------------------------

    def consistency_scan(self) -> list[str]:
        """Return ids of statements whose text does not re-derive from (doc, span).

        Statements whose document is absent (e.g. imported gold files) are
        skipped; a healthy corpus returns an empty list.
        """
        with self._lock:
            mismatches = []
            for stmt in self._state.statements.values():
                doc = self._state.documents.get(stmt.doc_id)
                if doc is None:
                    continue
                if stmt.span.slice(doc.extracted_text) != stmt.text:
                    mismatches.append(stmt.statement_id)
            return mismatches
