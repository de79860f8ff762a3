"""Minority-class oversampling: plain duplication and SMOTE interpolation.

Both operate on the training split only; invoking them after the split
is the pipeline's leakage guard.  SMOTE synthesizes points
x_new = x_i + u * (x_nn - x_i) with u ~ Uniform(0, 1) and x_nn one of
the k nearest minority neighbors of x_i (Euclidean), so every synthetic
point lies on a segment inside the minority class's convex hull.  When
the minority class is a single point, interpolation is undefined and we
fall back to duplication.
"""

from __future__ import annotations

import numpy as np

from geomove.learners.data import Dataset


def _minority(data: Dataset) -> tuple[int, int]:
    neg, pos = data.class_counts()
    if pos <= neg:
        return 1, neg - pos
    return 0, pos - neg


def oversample_random(train: Dataset, seed: int = 0) -> Dataset:
    """Duplicate uniformly random minority rows until the classes balance."""
    cls, need = _minority(train)
    if need == 0:
        return train
    rng = np.random.default_rng(seed)
    members = np.flatnonzero(train.y == cls)
    picks = rng.integers(0, len(members), size=need)
    chosen = members[picks]
    new_ids = train.ids + tuple(f"dup_{i}_{train.ids[j]}" for i, j in enumerate(chosen))
    return Dataset(
        ids=new_ids,
        X=np.vstack([train.X, train.X[chosen]]),
        y=np.concatenate([train.y, train.y[chosen]]),
    )


def smote_neighbors(minority_X: np.ndarray, k: int) -> np.ndarray:
    """Index matrix of each minority point's k nearest minority neighbors."""
    m = len(minority_X)
    k_eff = min(k, m - 1)
    diff = minority_X[:, None, :] - minority_X[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=2))
    np.fill_diagonal(dist, np.inf)
    return np.argsort(dist, axis=1, kind="stable")[:, :k_eff]


def oversample_smote(train: Dataset, k: int = 5, seed: int = 0) -> Dataset:
    """SMOTE to exact class balance; falls back to duplication when the
    minority class has fewer than 2 points."""
    cls, need = _minority(train)
    if need == 0:
        return train
    members = np.flatnonzero(train.y == cls)
    if len(members) < 2:
        return oversample_random(train, seed=seed)
    rng = np.random.default_rng(seed)
    minority_X = train.X[members]
    neighbors = smote_neighbors(minority_X, k)
    base = rng.integers(0, len(members), size=need)
    neighbor_pick = rng.integers(0, neighbors.shape[1], size=need)
    u = rng.random(size=need)
    x_i = minority_X[base]
    x_nn = minority_X[neighbors[base, neighbor_pick]]
    synthetic = x_i + u[:, None] * (x_nn - x_i)
    new_ids = train.ids + tuple(f"syn_{i}" for i in range(need))
    return Dataset(
        ids=new_ids,
        X=np.vstack([train.X, synthetic]),
        y=np.concatenate([train.y, np.full(need, cls, dtype=train.y.dtype)]),
    )
