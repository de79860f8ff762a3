"""CART decision tree shared by the forest (Gini classification) and
gradient boosting (MSE regression).

Split search is exact: every feature in the candidate set is sorted once
per node and all midpoints between distinct consecutive values are
scored with prefix sums.  Gain ties keep the first feature in candidate
order, so trees are deterministic given the node RNG.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

MIN_GAIN = 1e-12


@dataclass
class TreeNode:
    feature: int = -1
    threshold: float = 0.0
    left: int = -1
    right: int = -1
    value: float = 0.0  # positive fraction (gini) or mean target (mse)
    n_samples: int = 0

    @property
    def is_leaf(self) -> bool:
        return self.left < 0


@dataclass
class DecisionTree:
    criterion: str  # "gini" | "mse"
    max_depth: int
    min_samples_split: int = 2
    nodes: list[TreeNode] = field(default_factory=list)

    def fit(
        self,
        X: np.ndarray,
        y: np.ndarray,
        rng: Optional[np.random.Generator] = None,
        features_per_node: Optional[int] = None,
    ) -> "DecisionTree":
        self.nodes = []
        self._build(X, y, np.arange(len(y)), depth=0, rng=rng, k=features_per_node)
        return self

    # -- construction -----------------------------------------------------

    def _impurity(self, y: np.ndarray) -> float:
        if self.criterion == "gini":
            p = y.mean()
            return 2.0 * p * (1.0 - p)
        return float(y.var())

    def _best_split(
        self, X: np.ndarray, y: np.ndarray, idx: np.ndarray, feature_ids: np.ndarray
    ) -> Optional[tuple[float, int, float]]:
        n = len(idx)
        parent = self._impurity(y[idx])
        best: Optional[tuple[float, int, float]] = None
        yv = y[idx].astype(np.float64)
        for f in feature_ids:
            xs = X[idx, f]
            order = np.argsort(xs, kind="stable")
            xs_sorted = xs[order]
            ys_sorted = yv[order]
            # split after position k-1 (left size k), only where value changes
            cut = np.flatnonzero(xs_sorted[1:] > xs_sorted[:-1]) + 1
            if len(cut) == 0:
                continue
            csum = np.cumsum(ys_sorted)
            total = csum[-1]
            left_n = cut.astype(np.float64)
            right_n = n - left_n
            left_sum = csum[cut - 1]
            right_sum = total - left_sum
            if self.criterion == "gini":
                pl = left_sum / left_n
                pr = right_sum / right_n
                child = (left_n / n) * 2 * pl * (1 - pl) + (right_n / n) * 2 * pr * (1 - pr)
            else:
                csum2 = np.cumsum(ys_sorted**2)
                total2 = csum2[-1]
                left_sum2 = csum2[cut - 1]
                right_sum2 = total2 - left_sum2
                var_l = left_sum2 / left_n - (left_sum / left_n) ** 2
                var_r = right_sum2 / right_n - (right_sum / right_n) ** 2
                child = (left_n / n) * var_l + (right_n / n) * var_r
            gains = parent - child
            k = int(np.argmax(gains))
            if gains[k] > MIN_GAIN and (best is None or gains[k] > best[0]):
                pos = cut[k]
                threshold = 0.5 * (xs_sorted[pos - 1] + xs_sorted[pos])
                best = (float(gains[k]), int(f), float(threshold))
        return best

    def _build(self, X, y, idx, depth, rng, k) -> int:
        node_id = len(self.nodes)
        node = TreeNode(value=float(y[idx].mean()), n_samples=len(idx))
        self.nodes.append(node)
        if (
            depth >= self.max_depth
            or len(idx) < self.min_samples_split
            or self._impurity(y[idx]) <= MIN_GAIN
        ):
            return node_id
        n_features = X.shape[1]
        if k is not None and k < n_features:
            feature_ids = np.sort(rng.choice(n_features, size=k, replace=False))
        else:
            feature_ids = np.arange(n_features)
        found = self._best_split(X, y, idx, feature_ids)
        if found is None:
            return node_id
        _, f, threshold = found
        mask = X[idx, f] <= threshold
        node.feature = f
        node.threshold = threshold
        node.left = self._build(X, y, idx[mask], depth + 1, rng, k)
        node.right = self._build(X, y, idx[~mask], depth + 1, rng, k)
        return node_id

    # -- inference ----------------------------------------------------------

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf node id for every row, vectorized over the sample axis."""
        out = np.zeros(len(X), dtype=np.int64)
        stack = [(0, np.arange(len(X)))]
        while stack:
            node_id, rows = stack.pop()
            node = self.nodes[node_id]
            if node.is_leaf:
                out[rows] = node_id
                continue
            mask = X[rows, node.feature] <= node.threshold
            stack.append((node.left, rows[mask]))
            stack.append((node.right, rows[~mask]))
        return out

    def predict_value(self, X: np.ndarray) -> np.ndarray:
        values = np.array([n.value for n in self.nodes])
        return values[self.apply(X)]

    # -- serialization ------------------------------------------------------

    def get_state(self) -> dict:
        return {
            "criterion": self.criterion,
            "max_depth": self.max_depth,
            "min_samples_split": self.min_samples_split,
            "nodes": [
                [n.feature, n.threshold, n.left, n.right, n.value, n.n_samples]
                for n in self.nodes
            ],
        }

    @staticmethod
    def from_state(state: dict) -> "DecisionTree":
        tree = DecisionTree(
            criterion=state["criterion"],
            max_depth=state["max_depth"],
            min_samples_split=state["min_samples_split"],
        )
        tree.nodes = [
            TreeNode(feature=f, threshold=t, left=l, right=r, value=v, n_samples=n)
            for f, t, l, r, v, n in state["nodes"]
        ]
        return tree
