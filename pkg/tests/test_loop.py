"""Loop tests: precision accounting, iteration mechanics, exports, and the
synthetic end-to-end simulation."""

import json
import threading

import numpy as np
import pytest

from geomove.committee import Candidate, ComboSpec
from geomove.corpus.types import CharSpan, Label, ModelVote, Origin, Statement, Vote, Decision
from geomove.errors import (
    AlreadyReviewedError,
    EmptyPoolError,
    InsufficientNegativesError,
    IterationInProgressError,
)
from geomove.features import ExampleRow
from geomove.loop import (
    GeneratorConfig,
    IterationConfig,
    LoopState,
    OracleReviewer,
    ReviewDecision,
    ReviewQueue,
    export_gold,
    export_silver,
    import_gold,
    iteration_precision,
    reported_precision,
    run_iteration,
    simulate_loop,
)
from datetime import datetime, timezone

SIM_COMBOS = [
    ComboSpec("logreg+dense", "logreg", "dense", {"epochs": 60, "lr": 0.3}),
    ComboSpec("rf+dense", "random_forest", "dense", {"trees": 15, "max_depth": 5}),
    ComboSpec("gbdt+dense", "gbdt", "dense", {"rounds": 15, "depth": 2}),
]


class TestIterationPrecision:
    def test_first_round_value(self):
        p = iteration_precision(1, 749)
        assert p == pytest.approx(1 / 750)
        assert reported_precision(1, 749) == 0.001

    def test_zero_hits(self):
        assert iteration_precision(0, 790) == 0.0
        assert reported_precision(0, 790) == 0.0

    def test_undefined_flagged(self):
        assert iteration_precision(0, 0) is None
        assert reported_precision(0, 0) is None

    def test_presentation_rounding_examples(self):
        assert reported_precision(37, 772) == 0.05
        assert reported_precision(24, 637) == 0.04
        assert reported_precision(105, 306) == 0.25  # 0.2554 prints as 0.25


def synthetic_state(n_pool=300, seed=0):
    rng = np.random.default_rng(seed)
    mu = np.array([2.5, 2.5, 0.0, 0.0])
    corpus = []
    for i in range(6):
        corpus.append(ExampleRow(f"c_pos{i}", vector=mu + 0.3 * rng.normal(size=4), label=1))
    for i in range(40):
        corpus.append(ExampleRow(f"c_neg{i}", vector=rng.normal(size=4), label=0))
    pool = []
    for i in range(n_pool):
        positive = i % 10 == 0
        vec = mu + 0.3 * rng.normal(size=4) if positive else rng.normal(size=4)
        pool.append(ExampleRow(f"p{i:04d}", vector=vec, truth=int(positive)))
    return LoopState(corpus_rows=corpus, pool_rows=pool)


class TestRunIteration:
    def test_record_invariants_and_pool_shrinks(self):
        state = synthetic_state()
        before_corpus = len(state.corpus_rows)
        before_pool = len(state.pool_rows)
        config = IterationConfig(combos=SIM_COMBOS, batch_size=10, sweep_select=False,
                                 oversample="random")
        record = run_iteration(state, config, OracleReviewer())
        assert record.iter_num == 1
        assert record.candidates_predicted == record.tp + record.fp
        assert record.candidates_predicted <= 10
        assert record.corpus_total_after == before_corpus + record.candidates_predicted
        assert len(state.pool_rows) == before_pool - record.candidates_predicted
        corpus_ids = {r.statement_id for r in state.corpus_rows}
        pool_ids = {r.statement_id for r in state.pool_rows}
        assert corpus_ids.isdisjoint(pool_ids)
        if record.tp + record.fp:
            assert record.precision == pytest.approx(record.tp / (record.tp + record.fp))

    def test_reviewer_label_wins_over_prediction(self):
        state = synthetic_state(seed=3)

        class RejectAll:
            def decide(self, candidate):
                return ReviewDecision(confirmed=False)

        config = IterationConfig(combos=SIM_COMBOS, batch_size=5, sweep_select=False,
                                 oversample="random")
        record = run_iteration(state, config, RejectAll())
        assert record.tp == 0 and record.fp == record.candidates_predicted
        reviewed = state.corpus_rows[-record.candidates_predicted:]
        assert all(r.label == 0 for r in reviewed)

    def test_empty_pool_rejected(self):
        state = synthetic_state()
        state.pool_rows = []
        config = IterationConfig(combos=SIM_COMBOS, sweep_select=False)
        with pytest.raises(EmptyPoolError):
            run_iteration(state, config, OracleReviewer())

    def test_iteration_in_progress_latch(self):
        state = synthetic_state()
        config = IterationConfig(combos=SIM_COMBOS, sweep_select=False)
        assert state._latch.acquire(blocking=False)
        try:
            with pytest.raises(IterationInProgressError):
                run_iteration(state, config, OracleReviewer())
        finally:
            state._latch.release()

    def test_positive_count_non_decreasing_over_iterations(self):
        state = synthetic_state(n_pool=400, seed=5)
        config = IterationConfig(combos=SIM_COMBOS, batch_size=8, sweep_select=False,
                                 oversample="random")
        positives = [sum(1 for r in state.corpus_rows if r.label == 1)]
        for _ in range(3):
            run_iteration(state, config, OracleReviewer())
            positives.append(sum(1 for r in state.corpus_rows if r.label == 1))
        assert all(b >= a for a, b in zip(positives, positives[1:]))

    def test_sweep_select_path(self):
        state = synthetic_state(seed=7)
        config = IterationConfig(combos=SIM_COMBOS, batch_size=5, committee_k=2,
                                 sweep_select=True, oversample="random")
        record = run_iteration(state, config, OracleReviewer())
        assert record.candidates_predicted <= 5


class TestReviewQueue:
    def _queue(self):
        candidates = [
            Candidate(f"c{i}", 0.9 - i * 0.1, {}, {}, ExampleRow(f"c{i}")) for i in range(3)
        ]
        return ReviewQueue(candidates)

    def test_serves_in_order(self):
        q = self._queue()
        assert q.next_pending().statement_id == "c0"
        q.apply("c0", ReviewDecision(confirmed=True))
        assert q.next_pending().statement_id == "c1"

    def test_double_review_rejected(self):
        q = self._queue()
        q.apply("c1", ReviewDecision(confirmed=False))
        with pytest.raises(AlreadyReviewedError):
            q.apply("c1", ReviewDecision(confirmed=True))


def _statement(i, label=Label.MOVEMENT, votes=(), with_model=False):
    text = f"Statement number {i} travels far."
    kwargs = {}
    if with_model:
        kwargs = {
            "mean_probability": 0.8,
            "model_votes": {
                "m1": ModelVote(Label.MOVEMENT, 0.9),
                "m2": ModelVote(Label.NOT_MOVEMENT, 0.4),
            },
        }
    return Statement(
        statement_id=f"st_{i:03d}",
        doc_id=f"doc{i}",
        span=CharSpan(0, len(text)),
        text=text,
        label=label,
        origin=Origin.MODEL_PREDICTED if with_model else Origin.EXPERT_SEED,
        entity_type="hawk" if label is Label.MOVEMENT else None,
        votes=votes,
        **kwargs,
    )


class TestExportGold:
    def test_empty_corpus(self, tmp_path):
        path = tmp_path / "gold.jsonl"
        meta = export_gold([], path)
        assert meta["total"] == 0 and meta["positives"] == 0
        lines = path.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 1

    def test_three_statements_four_lines_and_round_trip(self, tmp_path):
        votes = (
            Vote("w1", Decision.AGREE, datetime(2024, 1, 1, tzinfo=timezone.utc)),
            Vote("w2", Decision.AGREE, datetime(2024, 1, 2, tzinfo=timezone.utc)),
            Vote("w3", Decision.AGREE, datetime(2024, 1, 3, tzinfo=timezone.utc)),
        )
        stmts = [
            _statement(1, votes=votes),
            _statement(2, label=Label.NOT_MOVEMENT),
            _statement(3, with_model=True),
        ]
        path = tmp_path / "gold.jsonl"
        meta = export_gold(stmts, path)
        assert meta == {"kind": "meta", "schema": "geomove-gold-v1", "total": 3, "positives": 2}
        first = path.read_bytes()
        assert len(first.decode("utf-8").splitlines()) == 4

        _, loaded = import_gold(path)
        path2 = tmp_path / "gold2.jsonl"
        export_gold(loaded, path2)
        assert path2.read_bytes() == first  # byte-identical round trip

    def test_round_trip_preserves_agreement(self, tmp_path):
        votes = (
            Vote("w1", Decision.AGREE, datetime(2024, 1, 1, tzinfo=timezone.utc)),
            Vote("w2", Decision.DISAGREE, datetime(2024, 1, 2, tzinfo=timezone.utc)),
        )
        path = tmp_path / "gold.jsonl"
        export_gold([_statement(5, votes=votes)], path)
        _, loaded = import_gold(path)
        assert loaded[0].agreement.value == "Undecided"


def _candidates(probs, seed_text="pool sentence"):
    out = []
    for i, p in enumerate(probs):
        row = ExampleRow(
            statement_id=f"p{i:03d}",
            doc_id="docp",
            span=(0, len(seed_text)),
            text=seed_text,
        )
        out.append(
            Candidate(
                statement_id=row.statement_id,
                mean_prob=p,
                member_probs={"m1": p, "m2": min(1.0, p + 0.05)},
                member_classes={"m1": int(p >= 0.5), "m2": int(p + 0.05 >= 0.5)},
                row=row,
            )
        )
    return out


class TestExportSilver:
    def test_balanced_and_disjoint(self, tmp_path):
        ranked = _candidates([0.95, 0.9, 0.8, 0.5, 0.4, 0.15, 0.1, 0.05, 0.02, 0.01])
        path = tmp_path / "silver.jsonl"
        meta = export_silver(ranked, path, threshold=0.77, negative_ceiling=0.2, seed=1)
        assert meta["positives"] == meta["negatives"] == 3
        lines = [json.loads(l) for l in path.read_text(encoding="utf-8").splitlines()]
        records = lines[1:]
        pos_ids = {r["statement_id"] for r in records if r["label"] == "Movement"}
        neg_ids = {r["statement_id"] for r in records if r["label"] == "NotMovement"}
        assert len(pos_ids) == len(neg_ids) == 3
        assert pos_ids.isdisjoint(neg_ids)
        for r in records:
            assert r["mean_probability"] is not None
            assert set(r["model_votes"]) == {"m1", "m2"}

    def test_threshold_above_one_gives_empty_valid_file(self, tmp_path):
        ranked = _candidates([0.9, 0.5, 0.1])
        path = tmp_path / "silver.jsonl"
        meta = export_silver(ranked, path, threshold=1.01, seed=0)
        assert meta["positives"] == 0 and meta["negatives"] == 0
        assert len(path.read_text(encoding="utf-8").splitlines()) == 1

    def test_seeded_sampling_reproducible(self, tmp_path):
        ranked = _candidates([0.9, 0.85, 0.8, 0.15, 0.12, 0.1, 0.08, 0.05, 0.03, 0.01])
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        export_silver(ranked, a, seed=42)
        export_silver(ranked, b, seed=42)
        assert a.read_bytes() == b.read_bytes()

    def test_insufficient_negatives(self, tmp_path):
        ranked = _candidates([0.9, 0.85, 0.8, 0.5])
        with pytest.raises(InsufficientNegativesError) as exc_info:
            export_silver(ranked, tmp_path / "s.jsonl", threshold=0.77, negative_ceiling=0.2)
        assert exc_info.value.shortfall == 3


class TestSimulateLoop:
    def test_zero_iterations(self):
        assert simulate_loop(GeneratorConfig(pool_size=500, positive_rate=0.05), 0, seed=0) == []

    def test_records_satisfy_invariants(self):
        g = GeneratorConfig(pool_size=1500, positive_rate=0.04, batch_size=10)
        records = simulate_loop(g, iterations=3, seed=2, combos=SIM_COMBOS)
        assert [r.iter_num for r in records] == [1, 2, 3]
        total = g.seed_pos + g.seed_neg
        for r in records:
            assert r.tp + r.fp == r.candidates_predicted
            total += r.candidates_predicted
            assert r.corpus_total_after == total

    def test_clean_structure_reaches_perfect_precision_fast(self):
        g = GeneratorConfig(
            pool_size=4000, positive_rate=0.05, noise=0.0, confusable_rate=0.0, batch_size=12
        )
        records = simulate_loop(g, iterations=3, seed=1, combos=SIM_COMBOS)
        assert max(r.precision or 0.0 for r in records) == 1.0

    def test_bad_rate_rejected(self):
        with pytest.raises(ValueError):
            simulate_loop(GeneratorConfig(positive_rate=1.5), 1, seed=0)
