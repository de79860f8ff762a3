"""Gradient-boosted regression trees on logistic loss.

Each round fits an MSE tree to the current negative gradient (y - p) and
replaces leaf values with the Newton step sum(g) / sum(p(1-p)); scores
accumulate through a shrinkage factor and the probability is the sigmoid
of the final score.  With zero rounds the model is the constant base
rate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from geomove.errors import NonFiniteLossError
from geomove.learners.common import log_loss, sigmoid
from geomove.learners.data import Dataset
from geomove.learners.tree import DecisionTree

LEAF_EPS = 1e-12


@dataclass(frozen=True)
class GBDTHyper:
    rounds: int = 30
    depth: int = 3
    shrinkage: float = 0.2
    min_samples_split: int = 2


@dataclass
class GBDTModel:
    kind = "gbdt"
    init_score: float
    trees: list[DecisionTree]
    leaf_values: list[dict[int, float]]
    hyper: GBDTHyper
    train_losses: list[float]

    def score(self, X: np.ndarray) -> np.ndarray:
        s = np.full(len(X), self.init_score, dtype=np.float64)
        for tree, leaves in zip(self.trees, self.leaf_values):
            leaf_ids = tree.apply(X)
            s += self.hyper.shrinkage * np.array([leaves[i] for i in leaf_ids])
        return s

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return sigmoid(self.score(X))

    def get_state(self) -> dict:
        return {
            "init_score": self.init_score,
            "trees": [t.get_state() for t in self.trees],
            "leaf_values": [{str(k): v for k, v in lv.items()} for lv in self.leaf_values],
            "hyper": vars(self.hyper),
            "train_losses": self.train_losses,
        }

    @staticmethod
    def from_state(state: dict) -> "GBDTModel":
        return GBDTModel(
            init_score=float(state["init_score"]),
            trees=[DecisionTree.from_state(t) for t in state["trees"]],
            leaf_values=[{int(k): v for k, v in lv.items()} for lv in state["leaf_values"]],
            hyper=GBDTHyper(**state["hyper"]),
            train_losses=list(state["train_losses"]),
        )


def train_gbdt(train: Dataset, hyper: GBDTHyper = GBDTHyper()) -> GBDTModel:
    y = train.y.astype(np.float64)
    base = float(np.clip(y.mean(), 1e-6, 1.0 - 1e-6))
    init_score = float(np.log(base / (1.0 - base)))
    F = np.full(len(y), init_score)
    trees: list[DecisionTree] = []
    leaf_values: list[dict[int, float]] = []
    losses: list[float] = [log_loss(y, sigmoid(F))]
    for _ in range(hyper.rounds):
        p = sigmoid(F)
        g = y - p
        h = p * (1.0 - p)
        tree = DecisionTree(
            criterion="mse", max_depth=hyper.depth, min_samples_split=hyper.min_samples_split
        )
        tree.fit(train.X, g)
        leaf_ids = tree.apply(train.X)
        values: dict[int, float] = {}
        for leaf in np.unique(leaf_ids):
            rows = leaf_ids == leaf
            values[int(leaf)] = float(g[rows].sum() / (h[rows].sum() + LEAF_EPS))
        F = F + hyper.shrinkage * np.array([values[int(i)] for i in leaf_ids])
        loss = log_loss(y, sigmoid(F))
        if not np.isfinite(loss):
            raise NonFiniteLossError(f"gbdt loss became {loss}")
        losses.append(loss)
        trees.append(tree)
        leaf_values.append(values)
    return GBDTModel(
        init_score=init_score,
        trees=trees,
        leaf_values=leaf_values,
        hyper=hyper,
        train_losses=losses,
    )
