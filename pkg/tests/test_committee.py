"""Committee tests: sweep isolation, top-k selection, ensemble rules,
pool ranking, and the committee-beats-median-member property."""

import numpy as np
import pytest

from geomove.committee import (
    Candidate,
    ComboSpec,
    SweepResult,
    SweepEntry,
    default_grid,
    ensemble_max_vote,
    ensemble_mean_prob,
    fit_committee,
    predict_committee,
    run_sweep,
    select_top_k,
)
from geomove.errors import EmptyCommitteeError, TooFewModelsError
from geomove.features import ExampleRow
from geomove.learners import evaluate_predictions, metrics_from_confusion


def dense_rows(n_pos, n_neg, dim=8, seed=0, shift=2.0, flip=0.0):
    rng = np.random.default_rng(seed)
    rows = []
    mu = np.zeros(dim)
    mu[: dim // 2] = shift / np.sqrt(dim // 2)
    for i in range(n_pos + n_neg):
        positive = i < n_pos
        vec = rng.normal(size=dim) + (mu if positive else 0.0)
        label = int(positive)
        if flip and rng.random() < flip:
            label = 1 - label
        rows.append(ExampleRow(statement_id=f"s{i:04d}", vector=vec, label=label, truth=label))
    return rows


FIVE_DENSE_COMBOS = [
    ComboSpec("logreg+dense", "logreg", "dense", {"epochs": 80, "lr": 0.3}),
    ComboSpec("svm+dense", "linear_svm", "dense", {"epochs": 80}),
    ComboSpec("rf+dense", "random_forest", "dense", {"trees": 15, "max_depth": 5}),
    ComboSpec("gbdt+dense", "gbdt", "dense", {"rounds": 15, "depth": 2}),
    ComboSpec("mlp1+dense", "mlp1", "dense", {"hidden": 6, "epochs": 80}),
]


class TestRunSweep:
    def test_two_combos_share_split(self):
        rows = dense_rows(20, 30, seed=1)
        sweep = run_sweep(rows, FIVE_DENSE_COMBOS[:2], seed=3, oversample="random")
        assert len(sweep.entries) == 2
        assert all(e.status == "ok" for e in sweep.entries)
        assert sweep.split_descriptor["train_rows"] == 40
        assert sweep.split_descriptor["test_rows"] == 10

    def test_failed_combo_is_isolated(self):
        rows = dense_rows(15, 25, seed=2)
        combos = [
            ComboSpec("bad+dense", "mlp1", "dense", {"hidden": 0}),
            ComboSpec("good+dense", "logreg", "dense", {"epochs": 50}),
        ]
        sweep = run_sweep(rows, combos, seed=0, oversample="none")
        by_id = {e.combo.combo_id: e for e in sweep.entries}
        assert by_id["bad+dense"].status == "failed"
        assert "hidden" in by_id["bad+dense"].error
        assert by_id["good+dense"].status == "ok"

    def test_sweep_result_round_trips(self, tmp_path):
        rows = dense_rows(15, 25, seed=4)
        sweep = run_sweep(rows, FIVE_DENSE_COMBOS[:3], seed=1, oversample="random")
        path = tmp_path / "results.json"
        sweep.save(path)
        loaded = SweepResult.load(path)
        assert loaded.to_dict() == sweep.to_dict()

    def test_default_grid_counts_match_config(self):
        from geomove.config import load_config

        config = load_config()
        combos = default_grid(config.sweep_grid)
        assert len(combos) == 28  # shipped preset: 5x4 sparse + 5 embedding + 3 mlp variants


def _entry(combo_id, f, p):
    combo = ComboSpec(combo_id, "logreg", "dense")
    tp = 50
    fp = int(round(tp * (1 - p) / p)) if p > 0 else 1
    # recall from F and P: F = 2PR/(P+R) => R = FP/(2P - F)
    r = f * p / (2 * p - f)
    fn = int(round(tp * (1 - r) / r))
    return SweepEntry(combo=combo, status="ok", metrics=metrics_from_confusion(tp, fp, 60, fn))


class TestSelectTopK:
    def test_table_style_fscores(self):
        scores = [0.69, 0.67, 0.65, 0.65, 0.65, 0.61]
        entries = []
        for i, f in enumerate(scores):
            combo = ComboSpec(f"m{i}", "logreg", "dense")
            metrics = metrics_from_confusion(100, 40, 100, 0)
            # overwrite with the exact F we want to rank by
            metrics = metrics.__class__(**{**metrics.to_dict(), "f_measure": f})
            entries.append(SweepEntry(combo=combo, status="ok", metrics=metrics))
        sweep = SweepResult(entries=tuple(entries), split_descriptor={})
        top = select_top_k(sweep, k=5)
        assert [c.combo_id for c in top] == ["m0", "m1", "m2", "m3", "m4"]  # 0.61 dropped

    def test_k_equals_available(self):
        rows = dense_rows(15, 25, seed=6)
        sweep = run_sweep(rows, FIVE_DENSE_COMBOS, seed=2, oversample="random")
        top = select_top_k(sweep, k=len(sweep.successful()))
        assert len(top) == len(sweep.successful())

    def test_exact_tie_breaks_lexicographically(self):
        metrics = metrics_from_confusion(50, 10, 50, 10)
        entries = [
            SweepEntry(ComboSpec("zeta", "logreg", "dense"), "ok", metrics),
            SweepEntry(ComboSpec("alpha", "logreg", "dense"), "ok", metrics),
        ]
        sweep = SweepResult(entries=tuple(entries), split_descriptor={})
        top = select_top_k(sweep, k=1)
        assert top[0].combo_id == "alpha"

    def test_too_few_models(self):
        sweep = SweepResult(
            entries=(SweepEntry(ComboSpec("a", "logreg", "dense"), "failed", error="x"),),
            split_descriptor={},
        )
        with pytest.raises(TooFewModelsError):
            select_top_k(sweep, k=1)


class TestEnsembleRules:
    def test_mean_prob_example(self):
        assert ensemble_mean_prob([0.9, 0.8, 0.7, 0.6, 0.5]) == pytest.approx(0.7)

    def test_mean_prob_constant(self):
        assert ensemble_mean_prob([0.42] * 5) == pytest.approx(0.42)

    def test_mean_prob_binary(self):
        assert ensemble_mean_prob([1, 0, 1, 0, 1]) == pytest.approx(0.6)

    def test_mean_prob_empty(self):
        with pytest.raises(EmptyCommitteeError):
            ensemble_mean_prob([])

    def test_mean_prob_bounded_and_permutation_invariant(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            probs = list(rng.random(5))
            mean = ensemble_mean_prob(probs)
            assert min(probs) <= mean <= max(probs)
            assert mean == pytest.approx(ensemble_mean_prob(probs[::-1]))

    def test_max_vote_majority(self):
        assert ensemble_max_vote([1, 1, 0, 1, 0], [0.9, 0.8, 0.4, 0.7, 0.3]) == 1

    def test_max_vote_tie_falls_back_to_mean(self):
        assert ensemble_max_vote([1, 0], [0.9, 0.7]) == 1  # mean 0.8 >= 0.5
        assert ensemble_max_vote([1, 0], [0.5, 0.1]) == 0  # mean 0.3 < 0.5

    def test_max_vote_unanimous_negative(self):
        assert ensemble_max_vote([0, 0, 0], [0.1, 0.2, 0.3]) == 0


class TestPredictCommittee:
    def test_ranking_descends(self):
        rows = dense_rows(25, 75, seed=7)
        committee = fit_committee(rows, FIVE_DENSE_COMBOS, oversample="random", seed=1)
        pool = dense_rows(5, 45, seed=8)
        ranked = predict_committee(committee, pool)
        assert len(ranked) == 50
        means = [c.mean_prob for c in ranked]
        assert means == sorted(means, reverse=True)
        for c in ranked:
            assert set(c.member_probs) == {m.combo.combo_id for m in committee.members}

    def test_empty_pool(self):
        rows = dense_rows(15, 25, seed=9)
        committee = fit_committee(rows, FIVE_DENSE_COMBOS[:1], oversample="random")
        assert predict_committee(committee, []) == []

    def test_equal_means_order_by_statement_id(self):
        candidates = [
            Candidate("b", 0.5, {}, {}, ExampleRow("b")),
            Candidate("a", 0.5, {}, {}, ExampleRow("a")),
        ]
        resorted = sorted(candidates, key=lambda c: (-c.mean_prob, c.statement_id))
        assert [c.statement_id for c in resorted] == ["a", "b"]


class TestCommitteeImprovementProperty:
    def test_mean_prob_committee_beats_median_member(self):
        """On noisy-separable data the averaged committee should match or
        beat the median member's precision in at least 16 of 20 seeds."""
        wins = 0
        for seed in range(20):
            rows = dense_rows(60, 140, dim=10, seed=seed, shift=1.8, flip=0.1)
            sweep = run_sweep(rows, FIVE_DENSE_COMBOS, seed=seed, oversample="random")
            ok = sweep.successful()
            assert len(ok) == 5
            committee_combos = select_top_k(sweep, k=5)
            committee = fit_committee(
                rows, committee_combos, oversample="random", seed=seed
            )
            test_rows = dense_rows(30, 70, dim=10, seed=1000 + seed, shift=1.8, flip=0.1)
            y = np.array([r.truth for r in test_rows])
            member_precisions = []
            member_probs = []
            for member in committee.members:
                probs = member.predict_proba_rows(test_rows)
                member_probs.append(probs)
                m = evaluate_predictions(y, probs)
                member_precisions.append(m.precision if m.precision is not None else 0.0)
            committee_probs = np.mean(member_probs, axis=0)
            cm = evaluate_predictions(y, committee_probs)
            committee_precision = cm.precision if cm.precision is not None else 0.0
            if committee_precision >= float(np.median(member_precisions)):
                wins += 1
        assert wins >= 16, f"committee beat median member in only {wins}/20 runs"
