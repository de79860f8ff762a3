"""Random forest: bagged Gini CARTs; the ensemble probability is the
fraction of trees whose leaf majority votes positive."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from geomove.learners.data import Dataset
from geomove.learners.tree import DecisionTree


@dataclass(frozen=True)
class ForestHyper:
    trees: int = 25
    max_depth: int = 8
    feature_subsample: Union[str, float] = "sqrt"  # "sqrt", "all", or a fraction
    min_samples_split: int = 2
    seed: int = 0


def _features_per_node(option: Union[str, float], n_features: int) -> Optional[int]:
    if option == "all":
        return None
    if option == "sqrt":
        return max(1, int(round(np.sqrt(n_features))))
    k = max(1, int(round(float(option) * n_features)))
    return min(k, n_features)


@dataclass
class RandomForestModel:
    kind = "random_forest"
    trees: list[DecisionTree]
    hyper: ForestHyper

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        votes = np.zeros(len(X), dtype=np.float64)
        for tree in self.trees:
            votes += (tree.predict_value(X) >= 0.5).astype(np.float64)
        return votes / len(self.trees)

    def get_state(self) -> dict:
        return {"trees": [t.get_state() for t in self.trees], "hyper": vars(self.hyper)}

    @staticmethod
    def from_state(state: dict) -> "RandomForestModel":
        return RandomForestModel(
            trees=[DecisionTree.from_state(t) for t in state["trees"]],
            hyper=ForestHyper(**state["hyper"]),
        )


def train_random_forest(train: Dataset, hyper: ForestHyper = ForestHyper()) -> RandomForestModel:
    rng = np.random.default_rng(hyper.seed)
    k = _features_per_node(hyper.feature_subsample, train.dim)
    trees = []
    for _ in range(hyper.trees):
        boot = rng.integers(0, len(train), size=len(train))
        tree = DecisionTree(
            criterion="gini",
            max_depth=hyper.max_depth,
            min_samples_split=hyper.min_samples_split,
        )
        tree.fit(train.X[boot], train.y[boot], rng=rng, features_per_node=k)
        trees.append(tree)
    return RandomForestModel(trees=trees, hyper=hyper)
