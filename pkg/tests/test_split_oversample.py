"""Split and oversampling tests, including the SMOTE geometry oracle."""

import numpy as np
import pytest

from geomove.errors import ClassTooSmallError
from geomove.learners import Dataset, oversample_random, oversample_smote, split_train_test


def make_dataset(n_pos, n_neg, dim=4, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n_pos + n_neg, dim))
    y = np.array([1] * n_pos + [0] * n_neg)
    ids = tuple(f"s{i}" for i in range(n_pos + n_neg))
    return Dataset(ids=ids, X=X, y=y)


class TestSplit:
    def test_ten_rows_80_20(self):
        data = make_dataset(5, 5)
        train, test = split_train_test(data, ratio=0.8, seed=3)
        assert len(train) == 8 and len(test) == 2
        assert train.class_counts() == (4, 4)
        assert test.class_counts() == (1, 1)

    def test_same_seed_identical(self):
        data = make_dataset(20, 30)
        a = split_train_test(data, seed=11)
        b = split_train_test(data, seed=11)
        assert a[0].ids == b[0].ids and a[1].ids == b[1].ids

    def test_thousand_rows_ratio_within_one(self):
        data = make_dataset(210, 790, seed=5)
        train, test = split_train_test(data, ratio=0.8, seed=7)
        neg, pos = train.class_counts()
        assert abs(pos - 0.8 * 210) <= 1
        assert abs(neg - 0.8 * 790) <= 1
        assert len(train) + len(test) == 1000
        assert set(train.ids).isdisjoint(test.ids)

    def test_class_too_small(self):
        data = make_dataset(1, 9)
        with pytest.raises(ClassTooSmallError):
            split_train_test(data, stratified=True)

    def test_bad_ratio(self):
        with pytest.raises(ValueError):
            split_train_test(make_dataset(5, 5), ratio=1.0)


class TestRandomOversample:
    def test_balanced_unchanged(self):
        data = make_dataset(5, 5)
        assert oversample_random(data, seed=1) is data

    def test_two_eight_becomes_eight_eight(self):
        data = make_dataset(2, 8)
        out = oversample_random(data, seed=2)
        neg, pos = out.class_counts()
        assert (neg, pos) == (8, 8)
        originals = {tuple(row) for row in data.X[data.y == 1]}
        for row in out.X[out.y == 1]:
            assert tuple(row) in originals  # every synthetic row is a copy

    def test_seeded_reproducible(self):
        data = make_dataset(3, 9)
        a = oversample_random(data, seed=4)
        b = oversample_random(data, seed=4)
        assert np.array_equal(a.X, b.X) and a.ids == b.ids


def brute_force_knn(points: np.ndarray, i: int, k: int) -> list[int]:
    """Plain O(n^2) nearest-neighbor oracle (stable order on distance ties)."""
    dists = [(float(np.linalg.norm(points[j] - points[i])), j) for j in range(len(points)) if j != i]
    dists.sort(key=lambda t: (t[0], t[1]))
    return [j for _, j in dists[:k]]


class TestSmote:
    def test_two_point_minority_stays_on_segment(self):
        rng = np.random.default_rng(0)
        a, b = rng.normal(size=(2, 3))
        X = np.vstack([[a, b], rng.normal(size=(8, 3)) + 10.0])
        data = Dataset(ids=tuple(f"s{i}" for i in range(10)), X=X, y=np.array([1, 1] + [0] * 8))
        out = oversample_smote(data, k=5, seed=7)
        direction = b - a
        for row in out.X[len(data):]:
            t = np.dot(row - a, direction) / np.dot(direction, direction)
            assert -1e-9 <= t <= 1 + 1e-9
            assert np.linalg.norm(row - (a + t * direction)) < 1e-9

    def test_singleton_minority_falls_back_to_duplication(self):
        data = make_dataset(1, 6)
        out = oversample_smote(data, k=5, seed=3)
        neg, pos = out.class_counts()
        assert (neg, pos) == (6, 6)
        minority_row = data.X[data.y == 1][0]
        for row in out.X[len(data):]:
            assert np.array_equal(row, minority_row)

    def test_synthetic_points_are_knn_convex_combinations(self):
        """Acceptance geometry: each synthetic x is on a segment from some
        minority point to one of its k=5 brute-force nearest neighbors."""
        data = make_dataset(50, 150, dim=6, seed=9)
        out = oversample_smote(data, k=5, seed=10)
        minority = data.X[data.y == 1]
        synthetic = out.X[len(data):]
        assert len(synthetic) == 100
        for row in synthetic:
            ok = False
            for i in range(len(minority)):
                for j in brute_force_knn(minority, i, 5):
                    d = minority[j] - minority[i]
                    denom = float(d @ d)
                    if denom == 0.0:
                        continue
                    t = float((row - minority[i]) @ d) / denom
                    if -1e-9 <= t <= 1 + 1e-9:
                        residual = np.linalg.norm(row - (minority[i] + t * d))
                        if residual < 1e-9:
                            ok = True
                            break
                if ok:
                    break
            assert ok, "synthetic point is not on any (x_i, kNN) segment"

    def test_synthetic_inside_minority_bounding_box(self):
        data = make_dataset(12, 40, dim=5, seed=13)
        out = oversample_smote(data, k=5, seed=14)
        minority = data.X[data.y == 1]
        lo, hi = minority.min(axis=0), minority.max(axis=0)
        for row in out.X[len(data):]:
            assert np.all(row >= lo - 1e-12) and np.all(row <= hi + 1e-12)

    def test_balances_exactly_and_reproducibly(self):
        data = make_dataset(7, 31, dim=4, seed=21)
        a = oversample_smote(data, seed=5)
        b = oversample_smote(data, seed=5)
        assert a.class_counts() == (31, 31)
        assert np.array_equal(a.X, b.X)
