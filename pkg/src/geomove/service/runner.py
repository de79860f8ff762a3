"""Background iteration runner bridging the loop engine and the review API.

One iteration at a time: the engine runs on a worker thread and blocks in
the InteractiveReviewer whenever it needs a human decision; HTTP review
posts supply the decisions and wake it.  Oracle runs (tests, automation
with a truth file) complete without blocking.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from typing import Optional

from geomove.committee import Candidate, default_grid, fit_committee, predict_committee
from geomove.config import Config
from geomove.corpus.store import CorpusStore
from geomove.errors import GeomoveError, IterationInProgressError, UnknownStatementError
from geomove.features.cleaning import load_contractions
from geomove.features.embeddings import EmbeddingProvider
from geomove.loop.engine import (
    PENDING,
    IterationConfig,
    LoopState,
    ReviewDecision,
    ReviewQueue,
    run_iteration,
)
from geomove.loop.pipeline import (
    corpus_rows_from_store,
    pool_rows_from_store,
    store_materializer,
)


class InteractiveReviewer:
    """ReviewerPort fed by HTTP: decide() blocks until a decision arrives."""

    def __init__(self):
        self._cond = threading.Condition()
        self.queue: Optional[ReviewQueue] = None

    def attach(self, queue: ReviewQueue) -> None:
        with self._cond:
            self.queue = queue
            self._cond.notify_all()

    def decide(self, candidate: Candidate) -> ReviewDecision:
        with self._cond:
            while (
                self.queue is None
                or candidate.statement_id not in self.queue.decisions
            ):
                self._cond.wait(timeout=0.5)
        return self.queue.decisions[candidate.statement_id]

    def next_pending(self) -> Optional[Candidate]:
        with self._cond:
            return self.queue.next_pending() if self.queue is not None else None

    def submit(self, statement_id: str, decision: ReviewDecision) -> None:
        with self._cond:
            if self.queue is None:
                raise UnknownStatementError(statement_id)
            self.queue.apply(statement_id, decision)
            self._cond.notify_all()


@dataclass
class RunStatus:
    run_id: str
    state: str  # "running" | "done" | "failed"
    record: Optional[dict] = None
    error: Optional[str] = None


@dataclass
class LoopRunner:
    store: CorpusStore
    config: Config
    embedding_provider: Optional[EmbeddingProvider] = None
    _runs: dict[str, RunStatus] = field(default_factory=dict)
    _thread: Optional[threading.Thread] = None
    _reviewer: Optional[InteractiveReviewer] = None
    _lock: threading.Lock = field(default_factory=threading.Lock)

    def _combos(self):
        grid = default_grid(self.config.sweep_grid)
        if self.embedding_provider is None:
            grid = [c for c in grid if c.feature_spec != "embedding"]
        return grid

    @property
    def running(self) -> bool:
        return self._thread is not None and self._thread.is_alive()

    def start_iteration(self, batch_size: Optional[int] = None) -> str:
        with self._lock:
            if self.running:
                raise IterationInProgressError("an iteration is already running")
            contractions = load_contractions(self.config.optional_path("contractions"))
            state = LoopState(
                corpus_rows=corpus_rows_from_store(
                    self.store, contractions, self.config.undecided_policy
                ),
                pool_rows=pool_rows_from_store(self.store, contractions),
                records=self.store.iterations(),
            )
            reviewer = InteractiveReviewer()
            run_id = uuid.uuid4().hex[:12]
            status = RunStatus(run_id=run_id, state="running")
            self._runs[run_id] = status
            iteration_config = IterationConfig(
                combos=self._combos(),
                batch_size=batch_size or self.config.batch_size,
                committee_k=self.config.committee_k,
                rule=self.config.committee_rule,
                oversample=self.config.oversample,
                smote_k=self.config.smote_k,
                min_df=self.config.min_df,
                seed=self.config.seed,
                embedding_provider=self.embedding_provider,
            )

            def work():
                try:
                    record = run_iteration(
                        state,
                        iteration_config,
                        reviewer,
                        materializer=store_materializer(self.store),
                        on_queue_ready=reviewer.attach,
                    )
                    self.store.record_iteration(record)
                    status.record = record.to_dict()
                    status.state = "done"
                except GeomoveError as exc:
                    status.state = "failed"
                    status.error = str(exc)
                except Exception as exc:  # keep the API responsive on bugs
                    status.state = "failed"
                    status.error = f"{type(exc).__name__}: {exc}"

            self._reviewer = reviewer
            self._thread = threading.Thread(target=work, name=f"iteration-{run_id}", daemon=True)
            self._thread.start()
            return run_id

    def run_status(self, run_id: str) -> Optional[RunStatus]:
        return self._runs.get(run_id)

    def review_next(self) -> Optional[Candidate]:
        if self._reviewer is None or not self.running:
            return None
        return self._reviewer.next_pending()

    def submit_review(self, statement_id: str, decision: ReviewDecision) -> None:
        if self._reviewer is None or not self.running:
            raise UnknownStatementError(statement_id)
        self._reviewer.submit(statement_id, decision)

    def pending_count(self) -> int:
        if self._reviewer is None or self._reviewer.queue is None:
            return 0
        return self._reviewer.queue.pending_count()

    def wait(self, timeout: Optional[float] = None) -> None:
        if self._thread is not None:
            self._thread.join(timeout)

    # -- silver export support -------------------------------------------

    def predict_pool(self) -> list[Candidate]:
        """Fit the committee on the current corpus and rank the whole pool."""
        contractions = load_contractions(self.config.optional_path("contractions"))
        corpus_rows = corpus_rows_from_store(
            self.store, contractions, self.config.undecided_policy
        )
        pool_rows = pool_rows_from_store(self.store, contractions)
        from geomove.committee import run_sweep, select_top_k

        combos = self._combos()
        sweep = run_sweep(
            corpus_rows,
            combos,
            seed=self.config.seed,
            oversample=self.config.oversample,
            smote_k=self.config.smote_k,
            min_df=self.config.min_df,
            embedding_provider=self.embedding_provider,
        )
        selected = select_top_k(sweep, k=min(self.config.committee_k, len(sweep.successful())))
        committee = fit_committee(
            corpus_rows,
            selected,
            rule=self.config.committee_rule,
            oversample=self.config.oversample,
            smote_k=self.config.smote_k,
            min_df=self.config.min_df,
            seed=self.config.seed,
            embedding_provider=self.embedding_provider,
        )
        return predict_committee(committee, pool_rows)
