"""Shared numerics and the trained-model protocol."""

from __future__ import annotations

from typing import Protocol, runtime_checkable

import numpy as np


def sigmoid(x: np.ndarray) -> np.ndarray:
    """Numerically stable logistic function."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def log_loss(y: np.ndarray, p: np.ndarray, eps: float = 1e-12) -> float:
    p = np.clip(p, eps, 1.0 - eps)
    return float(-np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))


@runtime_checkable
class TrainedModel(Protocol):
    """Anything with a kind and a probability-of-positive prediction."""

    kind: str

    def predict_proba(self, X: np.ndarray) -> np.ndarray: ...

    def get_state(self) -> dict: ...
