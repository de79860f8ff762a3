"""Binary evaluation metrics with explicit undefined flags.

Precision is None (never silently zero) when nothing was predicted
positive; recall is None when the test set has no positives; F follows
the harmonic-mean identity whenever both parts are defined.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from geomove.learners.common import TrainedModel
from geomove.learners.data import Dataset


@dataclass(frozen=True)
class EvalMetrics:
    tp: int
    fp: int
    tn: int
    fn: int
    accuracy: float
    precision: Optional[float]
    recall: Optional[float]
    f_measure: Optional[float]

    @property
    def precision_defined(self) -> bool:
        return self.precision is not None

    def to_dict(self) -> dict:
        return {
            "tp": self.tp,
            "fp": self.fp,
            "tn": self.tn,
            "fn": self.fn,
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f_measure": self.f_measure,
        }

    @staticmethod
    def from_dict(d: dict) -> "EvalMetrics":
        return EvalMetrics(
            tp=d["tp"], fp=d["fp"], tn=d["tn"], fn=d["fn"],
            accuracy=d["accuracy"], precision=d.get("precision"),
            recall=d.get("recall"), f_measure=d.get("f_measure"),
        )


def metrics_from_confusion(tp: int, fp: int, tn: int, fn: int) -> EvalMetrics:
    total = tp + fp + tn + fn
    if total == 0:
        raise ValueError("empty test set")
    precision = tp / (tp + fp) if (tp + fp) > 0 else None
    recall = tp / (tp + fn) if (tp + fn) > 0 else None
    if precision is not None and recall is not None and (precision + recall) > 0:
        f_measure = 2 * precision * recall / (precision + recall)
    elif precision is not None and recall is not None:
        f_measure = 0.0
    else:
        f_measure = None
    return EvalMetrics(
        tp=tp, fp=fp, tn=tn, fn=fn,
        accuracy=(tp + tn) / total,
        precision=precision, recall=recall, f_measure=f_measure,
    )


def evaluate_predictions(
    y_true: np.ndarray, probs: np.ndarray, threshold: float = 0.5
) -> EvalMetrics:
    predicted = (np.asarray(probs) >= threshold).astype(int)
    actual = np.asarray(y_true).astype(int)
    tp = int(np.sum((predicted == 1) & (actual == 1)))
    fp = int(np.sum((predicted == 1) & (actual == 0)))
    tn = int(np.sum((predicted == 0) & (actual == 0)))
    fn = int(np.sum((predicted == 0) & (actual == 1)))
    return metrics_from_confusion(tp, fp, tn, fn)


def evaluate(model: TrainedModel, test: Dataset, threshold: float = 0.5) -> EvalMetrics:
    if len(test) == 0:
        raise ValueError("empty test set")
    return evaluate_predictions(test.y, model.predict_proba(test.X), threshold)
