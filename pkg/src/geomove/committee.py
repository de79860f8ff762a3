"""Classifier-by-committee: the (model x feature) sweep, F-score ranking,
and probability-averaging / majority-vote ensembles.

Sweep metrics always come from one shared stratified 80/20 split; the
committee itself is then refit on the full corpus before it predicts
over the pool, which is also how the corpus this design comes from was
grown.  One failing combo never aborts a sweep: it is recorded as failed
and the rest continue.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from geomove.errors import EmptyCommitteeError, GeomoveError, TooFewModelsError
from geomove.features.embeddings import EmbeddingProvider
from geomove.features.specs import ExampleRow, Featurizer, fit_featurizer
from geomove.learners import (
    Dataset,
    EvalMetrics,
    evaluate,
    oversample_random,
    oversample_smote,
    train_model,
)
from geomove.learners.data import stratified_split_indices


@dataclass(frozen=True)
class ComboSpec:
    """One sweep cell: a model kind trained on a feature spec."""

    combo_id: str
    model_kind: str
    feature_spec: str
    hyper: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "combo_id": self.combo_id,
            "model_kind": self.model_kind,
            "feature_spec": self.feature_spec,
            "hyper": dict(self.hyper),
        }

    @staticmethod
    def from_dict(d: dict) -> "ComboSpec":
        return ComboSpec(
            combo_id=d["combo_id"],
            model_kind=d["model_kind"],
            feature_spec=d["feature_spec"],
            hyper=dict(d.get("hyper", {})),
        )


@dataclass(frozen=True)
class SweepEntry:
    combo: ComboSpec
    status: str  # "ok" | "failed"
    metrics: Optional[EvalMetrics] = None
    error: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "combo_id": self.combo.combo_id,
            "model": self.combo.model_kind,
            "features": self.combo.feature_spec,
            "hyper": dict(self.combo.hyper),
            "status": self.status,
            "metrics": self.metrics.to_dict() if self.metrics else None,
            "error": self.error,
        }


@dataclass(frozen=True)
class SweepResult:
    entries: tuple[SweepEntry, ...]
    split_descriptor: dict

    def successful(self) -> list[SweepEntry]:
        return [e for e in self.entries if e.status == "ok"]

    def to_dict(self) -> dict:
        return {
            "split": self.split_descriptor,
            "results": [e.to_dict() for e in self.entries],
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2), encoding="utf-8")

    @staticmethod
    def load(path: str | Path) -> "SweepResult":
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        entries = []
        for e in raw["results"]:
            combo = ComboSpec(
                combo_id=e["combo_id"],
                model_kind=e["model"],
                feature_spec=e["features"],
                hyper=dict(e.get("hyper", {})),
            )
            metrics = EvalMetrics.from_dict(e["metrics"]) if e.get("metrics") else None
            entries.append(
                SweepEntry(combo=combo, status=e["status"], metrics=metrics, error=e.get("error"))
            )
        return SweepResult(entries=tuple(entries), split_descriptor=raw["split"])


def _labels(rows: Sequence[ExampleRow]) -> np.ndarray:
    labels = np.array([r.label for r in rows])
    if any(l is None for l in (r.label for r in rows)):
        raise ValueError("all sweep rows need labels")
    return labels.astype(np.int64)


def _dataset(rows: Sequence[ExampleRow], featurizer: Featurizer) -> Dataset:
    return Dataset(
        ids=tuple(r.statement_id for r in rows),
        X=featurizer.matrix(rows),
        y=_labels(rows),
    )


def _oversampled(train: Dataset, how: str, smote_k: int, seed: int) -> Dataset:
    if how == "none":
        return train
    if how == "random":
        return oversample_random(train, seed=seed)
    if how == "smote":
        return oversample_smote(train, k=smote_k, seed=seed)
    raise ValueError(f"unknown oversample mode {how!r}")


def run_sweep(
    rows: Sequence[ExampleRow],
    combos: Sequence[ComboSpec],
    seed: int = 0,
    split_ratio: float = 0.8,
    oversample: str = "smote",
    smote_k: int = 5,
    min_df: int = 1,
    embedding_provider: Optional[EmbeddingProvider] = None,
) -> SweepResult:
    """Train/evaluate every combo on the same stratified split.

    Returns one entry per combo; failures carry status "failed" and the
    error text instead of aborting the sweep.
    """
    y = _labels(rows)
    if len(np.unique(y)) < 2:
        raise ValueError("sweep corpus needs both classes")
    train_idx, test_idx = stratified_split_indices(y, split_ratio, seed)
    train_rows = [rows[i] for i in train_idx]
    test_rows = [rows[i] for i in test_idx]
    descriptor = {
        "ratio": split_ratio,
        "seed": seed,
        "train_rows": len(train_rows),
        "test_rows": len(test_rows),
        "oversample": oversample,
    }
    entries = []
    for combo in combos:
        try:
            featurizer = fit_featurizer(
                combo.feature_spec,
                train_rows,
                min_df=min_df,
                embedding_provider=embedding_provider,
            )
            train_ds = _oversampled(_dataset(train_rows, featurizer), oversample, smote_k, seed)
            model = train_model(combo.model_kind, train_ds, dict(combo.hyper))
            metrics = evaluate(model, _dataset(test_rows, featurizer))
            entries.append(SweepEntry(combo=combo, status="ok", metrics=metrics))
        except (GeomoveError, ValueError, TypeError) as exc:
            entries.append(SweepEntry(combo=combo, status="failed", error=str(exc)))
    return SweepResult(entries=tuple(entries), split_descriptor=descriptor)


def select_top_k(sweep: SweepResult, k: int = 5, key: str = "f_measure") -> list[ComboSpec]:
    """The k best successful combos by F-measure.

    Ties break on higher precision, then lexicographic combo id, so a
    seeded sweep always reproduces the same committee.
    """
    scored = []
    for entry in sweep.successful():
        value = getattr(entry.metrics, key)
        if value is None:
            continue
        precision = entry.metrics.precision if entry.metrics.precision is not None else -1.0
        scored.append((-value, -precision, entry.combo.combo_id, entry.combo))
    if len(scored) < k:
        raise TooFewModelsError(f"need {k} successful combos, have {len(scored)}")
    scored.sort(key=lambda t: t[:3])
    return [combo for *_, combo in scored[:k]]


@dataclass
class CommitteeMember:
    combo: ComboSpec
    featurizer: Featurizer
    model: object  # TrainedModel

    def predict_proba_rows(self, rows: Sequence[ExampleRow]) -> np.ndarray:
        return self.model.predict_proba(self.featurizer.matrix(rows))


@dataclass
class Committee:
    """Ordered members (best F first) plus the combination rule."""

    members: list[CommitteeMember]
    rule: str = "mean_prob"  # "mean_prob" | "max_vote"

    @property
    def size(self) -> int:
        return len(self.members)


def fit_committee(
    rows: Sequence[ExampleRow],
    combos: Sequence[ComboSpec],
    rule: str = "mean_prob",
    oversample: str = "smote",
    smote_k: int = 5,
    min_df: int = 1,
    seed: int = 0,
    embedding_provider: Optional[EmbeddingProvider] = None,
) -> Committee:
    """Train the selected combos on the entire corpus (no held-out split)."""
    members = []
    for combo in combos:
        featurizer = fit_featurizer(
            combo.feature_spec, rows, min_df=min_df, embedding_provider=embedding_provider
        )
        train_ds = _oversampled(_dataset(rows, featurizer), oversample, smote_k, seed)
        model = train_model(combo.model_kind, train_ds, dict(combo.hyper))
        members.append(CommitteeMember(combo=combo, featurizer=featurizer, model=model))
    return Committee(members=members, rule=rule)


def ensemble_mean_prob(member_probs: Sequence[float]) -> float:
    """Arithmetic mean of member probabilities."""
    if len(member_probs) == 0:
        raise EmptyCommitteeError("mean probability of zero members")
    for p in member_probs:
        if not (0.0 <= p <= 1.0):
            raise ValueError(f"probability {p} outside [0, 1]")
    return float(sum(member_probs)) / len(member_probs)


def ensemble_max_vote(member_classes: Sequence[int], member_probs: Sequence[float]) -> int:
    """Majority class; an exact tie falls back to mean probability >= 0.5."""
    if len(member_classes) == 0:
        raise EmptyCommitteeError("max vote of zero members")
    positive = sum(1 for c in member_classes if c == 1)
    negative = len(member_classes) - positive
    if positive > negative:
        return 1
    if negative > positive:
        return 0
    return 1 if ensemble_mean_prob(member_probs) >= 0.5 else 0


@dataclass(frozen=True)
class Candidate:
    """One pool statement with the committee's verdict attached."""

    statement_id: str
    mean_prob: float
    member_probs: dict[str, float]  # combo_id -> probability
    member_classes: dict[str, int]
    row: ExampleRow

    @property
    def predicted_positive(self) -> bool:
        return self.mean_prob >= 0.5


def predict_committee(committee: Committee, pool: Sequence[ExampleRow]) -> list[Candidate]:
    """Rank the pool by descending mean probability.

    Per-member probabilities are retained for export metadata; equal
    means order by statement id so rankings are stable.
    """
    if not pool:
        return []
    per_member = [(m.combo.combo_id, m.predict_proba_rows(pool)) for m in committee.members]
    candidates = []
    for i, row in enumerate(pool):
        probs = {combo_id: float(p[i]) for combo_id, p in per_member}
        values = list(probs.values())
        candidates.append(
            Candidate(
                statement_id=row.statement_id,
                mean_prob=ensemble_mean_prob(values),
                member_probs=probs,
                member_classes={cid: int(p >= 0.5) for cid, p in probs.items()},
                row=row,
            )
        )
    candidates.sort(key=lambda c: (-c.mean_prob, c.statement_id))
    return candidates


def default_grid(grid_config: Sequence[dict]) -> list[ComboSpec]:
    """Materialize the configured sweep grid (the shipped preset has 28 cells)."""
    combos = []
    for cell in grid_config:
        model = cell["model"]
        features = cell["features"]
        hyper = dict(cell.get("hyper", {}))
        combo_id = cell.get("id") or f"{model}+{features}" + (
            "#" + "_".join(f"{k}={v}" for k, v in sorted(hyper.items())) if hyper else ""
        )
        combos.append(
            ComboSpec(combo_id=combo_id, model_kind=model, feature_spec=features, hyper=hyper)
        )
    if len({c.combo_id for c in combos}) != len(combos):
        raise ValueError("duplicate combo ids in grid config")
    return combos
