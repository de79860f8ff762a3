"""HTTP API over the store and loop for the annotator UI and automation.

JSON over HTTP/1.1; all character offsets are Unicode scalar values (the
same convention as the corpus journal).  Mutating endpoints honor an
Idempotency-Key header: retries with the same key replay the original
response instead of re-executing.  Every error body is
{"code", "message", "detail"}.
"""

from __future__ import annotations

import io
import threading
import time
from typing import Literal, Optional

from fastapi import Depends, FastAPI, Header, Request, Response
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from geomove.config import Config, load_config
from geomove.corpus.catalog import EntityTypeCatalog
from geomove.corpus.store import CorpusStore
from geomove.corpus.types import CharSpan, Decision, IngestStatus, Label, Origin
from geomove.corpus.voting import agreement_summary
from geomove.errors import (
    AlreadyReviewedError,
    DuplicateStatementError,
    DuplicateVoteError,
    EmptyPoolError,
    GeomoveError,
    InsufficientNegativesError,
    IterationInProgressError,
    SpanOutOfRangeError,
    TooFewModelsError,
    UnknownDocumentError,
    UnknownEntityTypeError,
    UnknownStatementError,
)
from geomove.features.embeddings import EmbeddingProvider
from geomove.loop.engine import ReviewDecision, reported_precision
from geomove.loop.exports import export_gold, export_silver
from geomove.service.runner import LoopRunner
from geomove.service.sessions import Worker, WorkerRegistry

ERROR_STATUS = {
    SpanOutOfRangeError: 400,
    UnknownEntityTypeError: 400,
    EmptyPoolError: 400,
    TooFewModelsError: 400,
    InsufficientNegativesError: 400,
    UnknownDocumentError: 404,
    UnknownStatementError: 404,
    DuplicateStatementError: 409,
    DuplicateVoteError: 409,
    AlreadyReviewedError: 409,
    IterationInProgressError: 409,
}


class StatementBody(BaseModel):
    doc_id: str
    span: dict
    label: str = "Movement"
    entity_type: Optional[str] = None


class VoteBody(BaseModel):
    statement_id: str
    decision: str


class ReviewBody(BaseModel):
    decision: Literal["confirm", "reject"]
    entity_type: Optional[str] = None


class RunBody(BaseModel):
    batch_size: Optional[int] = None


class _Leases:
    """Lease-based document assignment so two labelers never collide."""

    def __init__(self, ttl_seconds: int):
        self.ttl = ttl_seconds
        self._leases: dict[str, float] = {}
        self._last_served: dict[str, float] = {}
        self._lock = threading.Lock()

    def acquire_next(self, doc_ids: list[str]) -> Optional[str]:
        now = time.monotonic()
        with self._lock:
            available = [d for d in doc_ids if self._leases.get(d, 0.0) <= now]
            if not available:
                return None
            available.sort(key=lambda d: (self._last_served.get(d, 0.0), d))
            chosen = available[0]
            self._leases[chosen] = now + self.ttl
            self._last_served[chosen] = now
            return chosen


def create_app(
    store: CorpusStore,
    config: Optional[Config] = None,
    registry: Optional[WorkerRegistry] = None,
    catalog: Optional[EntityTypeCatalog] = None,
    embedding_provider: Optional[EmbeddingProvider] = None,
) -> FastAPI:
    config = config or load_config()
    registry = registry or WorkerRegistry.from_tsv(config.optional_path("workers"))
    catalog = catalog or EntityTypeCatalog.from_file(
        config.path_or_bundled("entity_types", "entity_types.txt")
    )
    runner = LoopRunner(store=store, config=config, embedding_provider=embedding_provider)
    leases = _Leases(config.lease_seconds)
    idempotency_cache: dict[tuple[str, str], tuple[int, bytes, str]] = {}
    app = FastAPI(title="geomove", version="0.1.0")
    app.state.store = store
    app.state.runner = runner

    # -- plumbing ----------------------------------------------------------

    def auth(x_worker_token: Optional[str] = Header(default=None)) -> Worker:
        worker = registry.authenticate(x_worker_token)
        if worker is None:
            raise PermissionError("missing or unknown worker token")
        return worker

    def require_role(worker: Worker, role: str) -> None:
        if worker.role != role:
            raise PermissionError(f"requires role {role!r}, token has {worker.role!r}")

    @app.exception_handler(GeomoveError)
    async def geomove_error_handler(request: Request, exc: GeomoveError):
        status = 400
        for cls, code in ERROR_STATUS.items():
            if isinstance(exc, cls):
                status = code
                break
        return JSONResponse(
            status_code=status,
            content={
                "code": type(exc).__name__,
                "message": str(exc),
                "detail": getattr(exc, "detail", None),
            },
        )

    @app.exception_handler(PermissionError)
    async def permission_error_handler(request: Request, exc: PermissionError):
        return JSONResponse(
            status_code=403,
            content={"code": "Forbidden", "message": str(exc), "detail": None},
        )

    @app.middleware("http")
    async def idempotency(request: Request, call_next):
        key = request.headers.get("Idempotency-Key")
        if not key or request.method not in ("POST", "PUT", "DELETE"):
            return await call_next(request)
        cache_key = (f"{request.method} {request.url.path}", key)
        if cache_key in idempotency_cache:
            status, body, media = idempotency_cache[cache_key]
            return Response(content=body, status_code=status, media_type=media)
        response = await call_next(request)
        body = b"".join([chunk async for chunk in response.body_iterator])
        idempotency_cache[cache_key] = (
            response.status_code,
            body,
            response.media_type or "application/json",
        )
        return Response(
            content=body,
            status_code=response.status_code,
            media_type=response.media_type,
            headers=dict(response.headers),
        )

    # -- labeling ------------------------------------------------------------

    @app.get("/documents/next")
    def documents_next(worker: Worker = Depends(auth)):
        require_role(worker, "expert")
        labeled_docs = {s.doc_id for s in store.statements()}
        candidates = [
            d.doc_id
            for d in store.documents()
            if d.ingest_status is IngestStatus.FILTERED_IN and d.doc_id not in labeled_docs
        ]
        doc_id = leases.acquire_next(sorted(candidates))
        if doc_id is None:
            return Response(status_code=204)
        doc = store.get_document(doc_id)
        return {
            "doc_id": doc.doc_id,
            "source_uri": doc.source_uri,
            "text": doc.extracted_text,
            "sentences": [s.to_dict() for s in doc.sentences],
            "place_mentions": [m.to_dict() for m in doc.place_mentions],
        }

    @app.post("/statements", status_code=201)
    def post_statement(body: StatementBody, worker: Worker = Depends(auth)):
        require_role(worker, "expert")
        stmt = store.create_statement(
            body.doc_id,
            CharSpan(int(body.span["start"]), int(body.span["end"])),
            label=Label(body.label),
            origin=Origin.EXPERT_SEED,
            entity_type=body.entity_type,
            catalog=catalog,
        )
        return stmt.to_dict()

    # -- voting ---------------------------------------------------------------

    @app.get("/statements/next")
    def statements_next(worker: Worker = Depends(auth)):
        require_role(worker, "voter")
        votable = [
            s
            for s in store.statements()
            if s.origin is Origin.EXPERT_SEED
            and all(v.worker_id != worker.worker_id for v in s.votes)
        ]
        if not votable:
            return Response(status_code=204)
        votable.sort(key=lambda s: (len(s.votes), s.statement_id))
        stmt = votable[0]
        payload = stmt.to_dict()
        payload["votes"] = len(stmt.votes)  # never expose other workers' identities
        return payload

    @app.post("/votes")
    def post_vote(body: VoteBody, worker: Worker = Depends(auth)):
        require_role(worker, "voter")
        stmt = store.cast_vote(body.statement_id, worker.worker_id, Decision(body.decision))
        return {
            "statement_id": stmt.statement_id,
            "agreement": stmt.agreement.value,
            "votes": len(stmt.votes),
        }

    # -- review ---------------------------------------------------------------

    @app.get("/review/next")
    def review_next(worker: Worker = Depends(auth)):
        require_role(worker, "reviewer")
        candidate = runner.review_next()
        if candidate is None:
            return Response(status_code=204)
        row = candidate.row
        return {
            "statement_id": candidate.statement_id,
            "doc_id": row.doc_id,
            "span": {"start": row.span[0], "end": row.span[1]} if row.span else None,
            "text": row.text,
            "mean_probability": candidate.mean_prob,
            "member_votes": {
                combo: {"probability": p, "positive": bool(candidate.member_classes[combo])}
                for combo, p in candidate.member_probs.items()
            },
            "pending": runner.pending_count(),
        }

    @app.post("/review/{statement_id}")
    def post_review(statement_id: str, body: ReviewBody, worker: Worker = Depends(auth)):
        require_role(worker, "reviewer")
        runner.submit_review(
            statement_id,
            ReviewDecision(confirmed=body.decision == "confirm", entity_type=body.entity_type),
        )
        return {"statement_id": statement_id, "applied": True}

    # -- iterations -------------------------------------------------------------

    @app.get("/iterations")
    def iterations(worker: Worker = Depends(auth)):
        records = []
        for record in store.iterations():
            d = record.to_dict()
            d["precision"] = reported_precision(record.tp, record.fp)
            d["precision_raw"] = record.precision
            records.append(d)
        return {"iterations": records}

    @app.post("/iterations/run", status_code=202)
    def run_iteration_endpoint(body: RunBody, worker: Worker = Depends(auth)):
        require_role(worker, "reviewer")
        run_id = runner.start_iteration(batch_size=body.batch_size)
        return {"run_id": run_id, "state": "running"}

    @app.get("/iterations/run/{run_id}")
    def run_status(run_id: str, worker: Worker = Depends(auth)):
        status = runner.run_status(run_id)
        if status is None:
            raise UnknownStatementError(run_id)
        return {
            "run_id": status.run_id,
            "state": status.state,
            "record": status.record,
            "error": status.error,
            "pending_reviews": runner.pending_count(),
        }

    # -- exports ----------------------------------------------------------------

    @app.get("/export/gold")
    def export_gold_endpoint(worker: Worker = Depends(auth)):
        buffer = io.StringIO()
        export_gold(store.statements(), buffer)
        return PlainTextResponse(buffer.getvalue(), media_type="application/x-ndjson")

    @app.get("/export/silver")
    def export_silver_endpoint(
        threshold: float = 0.77, seed: int = 0, worker: Worker = Depends(auth)
    ):
        ranked = runner.predict_pool()
        buffer = io.StringIO()
        export_silver(
            ranked,
            buffer,
            threshold=threshold,
            negative_ceiling=config.negative_ceiling,
            seed=seed,
        )
        return PlainTextResponse(buffer.getvalue(), media_type="application/x-ndjson")

    # -- misc --------------------------------------------------------------------

    @app.get("/catalog/entity-types")
    def entity_types(worker: Worker = Depends(auth)):
        return {"entity_types": catalog.names}

    @app.get("/corpus/stats")
    def corpus_stats(worker: Worker = Depends(auth)):
        statements = store.statements()
        return {
            "documents": len(store.documents()),
            "statements": len(statements),
            "positives": sum(1 for s in statements if s.label is Label.MOVEMENT),
            "agreement": agreement_summary(statements).to_dict(),
            "iterations": len(store.iterations()),
        }

    return app
