"""The iteration engine: train committee on the corpus, rank the unseen
pool, queue the top candidates for human review, fold the decisions back
into the corpus, and record the round.

Humans have final authority: a reviewed candidate enters the corpus with
the reviewer's label whatever the committee predicted, and rejected
candidates are added as negatives (the per-iteration corpus totals only
add up if false positives are kept).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from decimal import ROUND_HALF_DOWN, ROUND_HALF_EVEN, Decimal
from typing import Callable, Optional, Protocol, Sequence

from geomove.committee import (
    Candidate,
    ComboSpec,
    fit_committee,
    predict_committee,
    run_sweep,
    select_top_k,
)
from geomove.corpus.types import IterationRecord
from geomove.errors import (
    AlreadyReviewedError,
    EmptyPoolError,
    IterationInProgressError,
    UnknownStatementError,
)
from geomove.features.embeddings import EmbeddingProvider
from geomove.features.specs import ExampleRow


def iteration_precision(tp: int, fp: int) -> Optional[float]:
    """tp / (tp + fp); None flags the undefined 0/0 case."""
    if tp < 0 or fp < 0:
        raise ValueError("counts must be non-negative")
    if tp + fp == 0:
        return None
    return tp / (tp + fp)


def reported_precision(tp: int, fp: int) -> Optional[float]:
    """Presentation rounding for iteration tables.

    Round to 3 decimals first; values at or above 0.01 are rounded again
    to 2 decimals with ties toward zero.  The second stage works on the
    already-rounded value, which reproduces how the reference tables were
    typeset (37/809 prints 0.05 while 105/411 prints 0.25, not 0.26).
    """
    p = iteration_precision(tp, fp)
    if p is None:
        return None
    p3 = Decimal(repr(p)).quantize(Decimal("0.001"), rounding=ROUND_HALF_EVEN)
    if p3 < Decimal("0.01"):
        return float(p3)
    return float(p3.quantize(Decimal("0.01"), rounding=ROUND_HALF_DOWN))


@dataclass(frozen=True)
class ReviewDecision:
    confirmed: bool
    entity_type: Optional[str] = None


class ReviewerPort(Protocol):
    """Total over any queue: must produce a decision for every candidate."""

    def decide(self, candidate: Candidate) -> ReviewDecision: ...


class OracleReviewer:
    """Answers from planted ground truth (simulation and tests)."""

    def __init__(self, entity_type: Optional[str] = None):
        self.entity_type = entity_type

    def decide(self, candidate: Candidate) -> ReviewDecision:
        if candidate.row.truth is None:
            raise ValueError(f"candidate {candidate.statement_id} has no planted truth")
        confirmed = bool(candidate.row.truth)
        return ReviewDecision(confirmed=confirmed, entity_type=self.entity_type if confirmed else None)


PENDING = "Pending"
CONFIRMED = "Confirmed"
REJECTED = "Rejected"


class ReviewQueue:
    """Ordered pending candidates; each is reviewed at most once."""

    def __init__(self, candidates: Sequence[Candidate]):
        self.candidates = list(candidates)  # already descending by mean_prob
        self.states: dict[str, str] = {c.statement_id: PENDING for c in self.candidates}
        self.decisions: dict[str, ReviewDecision] = {}

    def __len__(self) -> int:
        return len(self.candidates)

    def next_pending(self) -> Optional[Candidate]:
        for candidate in self.candidates:
            if self.states[candidate.statement_id] == PENDING:
                return candidate
        return None

    def pending_count(self) -> int:
        return sum(1 for s in self.states.values() if s == PENDING)

    def apply(self, statement_id: str, decision: ReviewDecision) -> None:
        if statement_id not in self.states:
            raise UnknownStatementError(statement_id)
        if self.states[statement_id] != PENDING:
            raise AlreadyReviewedError(f"{statement_id} was already reviewed this iteration")
        self.states[statement_id] = CONFIRMED if decision.confirmed else REJECTED
        self.decisions[statement_id] = decision


@dataclass
class IterationConfig:
    combos: list[ComboSpec]
    batch_size: int = 700
    committee_k: int = 5
    rule: str = "mean_prob"
    sweep_select: bool = True  # False: skip the split sweep, use combos as-is
    oversample: str = "smote"
    smote_k: int = 5
    min_df: int = 1
    seed: int = 0
    embedding_provider: Optional[EmbeddingProvider] = None


# Called for each reviewed candidate so a store can persist the statement.
Materializer = Callable[[Candidate, ReviewDecision], None]


@dataclass
class LoopState:
    """Corpus and pool rows plus the iteration log.  One iteration at a time."""

    corpus_rows: list[ExampleRow]
    pool_rows: list[ExampleRow]
    records: list[IterationRecord] = field(default_factory=list)
    _latch: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def iteration_in_progress(self) -> bool:
        return self._latch.locked()


def run_iteration(
    state: LoopState,
    config: IterationConfig,
    reviewer: ReviewerPort,
    materializer: Optional[Materializer] = None,
    on_queue_ready: Optional[Callable[[ReviewQueue], None]] = None,
) -> IterationRecord:
    """One bootstrapping round over ``state``.

    The committee is refit on the full current corpus, the highest-mean-
    probability positive predictions are queued (at most ``batch_size``),
    every queued candidate is decided by the reviewer, and all reviewed
    rows move from the pool into the corpus under the reviewer's label.
    """
    if not state._latch.acquire(blocking=False):
        raise IterationInProgressError("an iteration is already running")
    try:
        if not state.pool_rows:
            raise EmptyPoolError("pool has no unseen rows")
        labels = {r.label for r in state.corpus_rows}
        if labels != {0, 1}:
            raise ValueError(f"corpus must contain both classes, has labels {labels}")

        combos = config.combos
        if config.sweep_select:
            sweep = run_sweep(
                state.corpus_rows,
                combos,
                seed=config.seed,
                oversample=config.oversample,
                smote_k=config.smote_k,
                min_df=config.min_df,
                embedding_provider=config.embedding_provider,
            )
            combos = select_top_k(sweep, k=config.committee_k)
        committee = fit_committee(
            state.corpus_rows,
            combos,
            rule=config.rule,
            oversample=config.oversample,
            smote_k=config.smote_k,
            min_df=config.min_df,
            seed=config.seed,
            embedding_provider=config.embedding_provider,
        )
        ranked = predict_committee(committee, state.pool_rows)
        positives = [c for c in ranked if c.predicted_positive]
        queue = ReviewQueue(positives[: config.batch_size])
        if on_queue_ready is not None:
            on_queue_ready(queue)

        tp = fp = 0
        reviewed_ids = set()
        for candidate in queue.candidates:
            decision = reviewer.decide(candidate)
            if queue.states[candidate.statement_id] == PENDING:
                queue.apply(candidate.statement_id, decision)
            else:
                decision = queue.decisions[candidate.statement_id]
            if decision.confirmed:
                tp += 1
            else:
                fp += 1
            state.corpus_rows.append(candidate.row.with_label(1 if decision.confirmed else 0))
            reviewed_ids.add(candidate.statement_id)
            if materializer is not None:
                materializer(candidate, decision)
        state.pool_rows = [r for r in state.pool_rows if r.statement_id not in reviewed_ids]

        record = IterationRecord(
            iter_num=len(state.records) + 1,
            candidates_predicted=len(queue),
            tp=tp,
            fp=fp,
            precision=iteration_precision(tp, fp),
            corpus_total_after=len(state.corpus_rows),
        )
        state.records.append(record)
        return record
    finally:
        state._latch.release()
