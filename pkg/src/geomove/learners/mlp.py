"""One-hidden-layer neural network (tanh hidden, sigmoid output) trained
with seeded minibatch gradient descent on cross-entropy.  tanh keeps the
loss smooth everywhere, which the finite-difference gradient checks rely
on."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from geomove.errors import NonFiniteLossError
from geomove.learners.common import log_loss, sigmoid
from geomove.learners.data import Dataset


@dataclass(frozen=True)
class MLPHyper:
    hidden: int = 16
    lr: float = 0.5
    epochs: int = 300
    l2: float = 1e-5
    batch_size: int = 32
    seed: int = 0


def mlp_loss_and_grad(
    params: dict[str, np.ndarray], X: np.ndarray, y: np.ndarray, l2: float
) -> tuple[float, dict[str, np.ndarray]]:
    """Cross-entropy + (l2/2)(||W1||^2 + ||w2||^2) with exact backprop grads."""
    W1, b1, w2, b2 = params["W1"], params["b1"], params["w2"], params["b2"]
    n = len(y)
    H = np.tanh(X @ W1 + b1)
    z = H @ w2 + b2
    p = sigmoid(z)
    loss = log_loss(y, p) + 0.5 * l2 * (float((W1**2).sum()) + float(w2 @ w2))
    dz = (p - y) / n
    grad_w2 = H.T @ dz + l2 * w2
    grad_b2 = float(dz.sum())
    dH = np.outer(dz, w2)
    dA = dH * (1.0 - H**2)
    grad_W1 = X.T @ dA + l2 * W1
    grad_b1 = dA.sum(axis=0)
    return loss, {"W1": grad_W1, "b1": grad_b1, "w2": grad_w2, "b2": np.array([grad_b2])}


@dataclass
class MLP1Model:
    kind = "mlp1"
    W1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: float
    hyper: MLPHyper

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        H = np.tanh(X @ self.W1 + self.b1)
        return sigmoid(H @ self.w2 + self.b2)

    def get_state(self) -> dict:
        return {
            "W1": self.W1.tolist(),
            "b1": self.b1.tolist(),
            "w2": self.w2.tolist(),
            "b2": self.b2,
            "hyper": vars(self.hyper),
        }

    @staticmethod
    def from_state(state: dict) -> "MLP1Model":
        return MLP1Model(
            W1=np.array(state["W1"], dtype=np.float64),
            b1=np.array(state["b1"], dtype=np.float64),
            w2=np.array(state["w2"], dtype=np.float64),
            b2=float(state["b2"]),
            hyper=MLPHyper(**state["hyper"]),
        )


def init_params(dim: int, hidden: int, seed: int) -> dict[str, np.ndarray]:
    rng = np.random.default_rng(seed)
    return {
        "W1": rng.normal(scale=1.0 / np.sqrt(max(dim, 1)), size=(dim, hidden)),
        "b1": np.zeros(hidden),
        "w2": rng.normal(scale=1.0 / np.sqrt(hidden), size=hidden),
        "b2": np.zeros(1),
    }


def train_mlp1(train: Dataset, hyper: MLPHyper = MLPHyper()) -> MLP1Model:
    if hyper.hidden <= 0:
        raise ValueError(f"hidden units must be positive, got {hyper.hidden}")
    rng = np.random.default_rng(hyper.seed)
    params = init_params(train.dim, hyper.hidden, hyper.seed)
    n = len(train)
    batch = max(1, min(hyper.batch_size, n))
    for _ in range(hyper.epochs):
        order = rng.permutation(n)
        for start in range(0, n, batch):
            rows = order[start : start + batch]
            _, grads = mlp_loss_and_grad(params, train.X[rows], train.y[rows], hyper.l2)
            for key in params:
                params[key] = params[key] - hyper.lr * grads[key]
        loss, _ = mlp_loss_and_grad(params, train.X, train.y, hyper.l2)
        if not np.isfinite(loss):
            raise NonFiniteLossError(f"mlp loss became {loss}; lower the learning rate")
    return MLP1Model(
        W1=params["W1"], b1=params["b1"], w2=params["w2"], b2=float(params["b2"][0]), hyper=hyper
    )
