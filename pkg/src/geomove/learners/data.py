"""Dataset container and the deterministic stratified train/test split."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from geomove.errors import ClassTooSmallError


@dataclass(frozen=True)
class Dataset:
    """Rows of (statement_id, dense feature vector, binary label)."""

    ids: tuple[str, ...]
    X: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        if self.X.ndim != 2:
            raise ValueError("X must be 2-D (rows x features)")
        if len(self.ids) != self.X.shape[0] or len(self.y) != self.X.shape[0]:
            raise ValueError("ids, X, and y must have the same number of rows")
        if not np.isin(self.y, (0, 1)).all():
            raise ValueError("labels must be 0/1")

    def __len__(self) -> int:
        return self.X.shape[0]

    @property
    def dim(self) -> int:
        return self.X.shape[1]

    def class_counts(self) -> tuple[int, int]:
        pos = int(self.y.sum())
        return len(self) - pos, pos

    def subset(self, indices: np.ndarray) -> "Dataset":
        return Dataset(
            ids=tuple(self.ids[i] for i in indices),
            X=self.X[indices],
            y=self.y[indices],
        )


def stratified_split_indices(
    y: np.ndarray, ratio: float, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Seeded per-class index split preserving class ratios to +-1 row.

    Raises ClassTooSmallError when some class cannot put at least one row
    on each side.
    """
    if not (0.0 < ratio < 1.0):
        raise ValueError(f"ratio must be in (0, 1), got {ratio}")
    rng = np.random.default_rng(seed)
    train_idx: list[int] = []
    test_idx: list[int] = []
    for cls in (0, 1):
        members = np.flatnonzero(y == cls)
        if len(members) < 2:
            raise ClassTooSmallError(
                f"class {cls} has {len(members)} rows; stratified split needs >= 2"
            )
        order = rng.permutation(members)
        n_train = int(round(ratio * len(members)))
        n_train = min(max(n_train, 1), len(members) - 1)
        train_idx.extend(order[:n_train])
        test_idx.extend(order[n_train:])
    return (
        np.sort(np.array(train_idx, dtype=np.int64)),
        np.sort(np.array(test_idx, dtype=np.int64)),
    )


def split_train_test(
    data: Dataset, ratio: float = 0.8, seed: int = 0, stratified: bool = True
) -> tuple[Dataset, Dataset]:
    """Deterministic (seeded) split; stratified keeps class ratios to +-1 row."""
    if stratified:
        train_idx, test_idx = stratified_split_indices(data.y, ratio, seed)
    else:
        if not (0.0 < ratio < 1.0):
            raise ValueError(f"ratio must be in (0, 1), got {ratio}")
        rng = np.random.default_rng(seed)
        order = rng.permutation(len(data))
        n_train = min(max(int(round(ratio * len(data))), 1), len(data) - 1)
        train_idx = np.sort(order[:n_train])
        test_idx = np.sort(order[n_train:])
    return data.subset(train_idx), data.subset(test_idx)
