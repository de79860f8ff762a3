"""Logistic regression by seeded minibatch SGD on L2-regularized
cross-entropy.  The loss/gradient pair is exposed separately so tests can
check the analytic gradient against central finite differences."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from geomove.errors import NonFiniteLossError
from geomove.learners.common import log_loss, sigmoid
from geomove.learners.data import Dataset


@dataclass(frozen=True)
class LogRegHyper:
    lr: float = 0.1
    epochs: int = 200
    l2: float = 1e-4
    batch_size: int = 32
    seed: int = 0


def logreg_loss_and_grad(
    w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray, l2: float
) -> tuple[float, np.ndarray, float]:
    """Mean cross-entropy + (l2/2)||w||^2 and its exact gradient."""
    n = len(y)
    p = sigmoid(X @ w + b)
    loss = log_loss(y, p) + 0.5 * l2 * float(w @ w)
    residual = (p - y) / n
    grad_w = X.T @ residual + l2 * w
    grad_b = float(residual.sum())
    return loss, grad_w, grad_b


@dataclass
class LogRegModel:
    kind = "logreg"
    w: np.ndarray
    b: float
    hyper: LogRegHyper

    def decision(self, X: np.ndarray) -> np.ndarray:
        return X @ self.w + self.b

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return sigmoid(self.decision(X))

    def get_state(self) -> dict:
        return {"w": self.w.tolist(), "b": self.b, "hyper": vars(self.hyper)}

    @staticmethod
    def from_state(state: dict) -> "LogRegModel":
        return LogRegModel(
            w=np.array(state["w"], dtype=np.float64),
            b=float(state["b"]),
            hyper=LogRegHyper(**state["hyper"]),
        )


def train_logreg(train: Dataset, hyper: LogRegHyper = LogRegHyper()) -> LogRegModel:
    rng = np.random.default_rng(hyper.seed)
    n, d = train.X.shape
    w = np.zeros(d)
    b = 0.0
    batch = max(1, min(hyper.batch_size, n))
    for _ in range(hyper.epochs):
        order = rng.permutation(n)
        for start in range(0, n, batch):
            rows = order[start : start + batch]
            _, gw, gb = logreg_loss_and_grad(w, b, train.X[rows], train.y[rows], hyper.l2)
            w -= hyper.lr * gw
            b -= hyper.lr * gb
        loss, _, _ = logreg_loss_and_grad(w, b, train.X, train.y, hyper.l2)
        if not np.isfinite(loss):
            raise NonFiniteLossError(f"logreg loss became {loss}; lower the learning rate")
    return LogRegModel(w=w, b=b, hyper=hyper)
