"""Linear SVM by seeded subgradient descent on L2-regularized hinge loss,
with probability calibration: a logistic link fitted on held-out margins
(the committee averages probabilities, so every member must produce one).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from geomove.errors import NonFiniteLossError
from geomove.learners.common import sigmoid
from geomove.learners.data import Dataset, split_train_test


@dataclass(frozen=True)
class SVMHyper:
    lr: float = 0.05
    epochs: int = 300
    l2: float = 1e-3
    batch_size: int = 32
    seed: int = 0
    calib_ratio: float = 0.8


def hinge_loss_and_subgrad(
    w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray, l2: float
) -> tuple[float, np.ndarray, float]:
    """Mean hinge + (l2/2)||w||^2; the subgradient picks 0 on the kink."""
    n = len(y)
    s = 2.0 * y - 1.0
    margins = s * (X @ w + b)
    active = margins < 1.0
    loss = float(np.maximum(0.0, 1.0 - margins).mean()) + 0.5 * l2 * float(w @ w)
    grad_w = -(X[active].T @ s[active]) / n + l2 * w
    grad_b = float(-s[active].sum() / n)
    return loss, grad_w, grad_b


def _fit_platt(margins: np.ndarray, y: np.ndarray, iters: int = 60) -> tuple[float, float]:
    """Newton fit of p = sigmoid(a*m + c) on held-out (margin, label) pairs."""
    a, c = 1.0, 0.0
    lam = 1e-6  # tiny ridge keeps the 2x2 Hessian invertible
    for _ in range(iters):
        z = a * margins + c
        p = sigmoid(z)
        r = p - y
        g = np.array([float(r @ margins) + lam * a, float(r.sum())])
        s = np.maximum(p * (1 - p), 1e-12)
        h11 = float(s @ (margins**2)) + lam
        h12 = float(s @ margins)
        h22 = float(s.sum()) + lam
        det = h11 * h22 - h12 * h12
        if not np.isfinite(det) or abs(det) < 1e-18:
            break
        da = (h22 * g[0] - h12 * g[1]) / det
        dc = (h11 * g[1] - h12 * g[0]) / det
        a -= da
        c -= dc
        if abs(da) + abs(dc) < 1e-10:
            break
    return a, c


@dataclass
class LinearSVMModel:
    kind = "linear_svm"
    w: np.ndarray
    b: float
    calib_a: float
    calib_c: float
    hyper: SVMHyper

    def decision(self, X: np.ndarray) -> np.ndarray:
        return X @ self.w + self.b

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return sigmoid(self.calib_a * self.decision(X) + self.calib_c)

    def get_state(self) -> dict:
        return {
            "w": self.w.tolist(),
            "b": self.b,
            "calib_a": self.calib_a,
            "calib_c": self.calib_c,
            "hyper": vars(self.hyper),
        }

    @staticmethod
    def from_state(state: dict) -> "LinearSVMModel":
        return LinearSVMModel(
            w=np.array(state["w"], dtype=np.float64),
            b=float(state["b"]),
            calib_a=float(state["calib_a"]),
            calib_c=float(state["calib_c"]),
            hyper=SVMHyper(**state["hyper"]),
        )


def _descend(train: Dataset, hyper: SVMHyper, rng: np.random.Generator) -> tuple[np.ndarray, float]:
    n, d = train.X.shape
    w = np.zeros(d)
    b = 0.0
    batch = max(1, min(hyper.batch_size, n))
    for _ in range(hyper.epochs):
        order = rng.permutation(n)
        for start in range(0, n, batch):
            rows = order[start : start + batch]
            _, gw, gb = hinge_loss_and_subgrad(w, b, train.X[rows], train.y[rows], hyper.l2)
            w -= hyper.lr * gw
            b -= hyper.lr * gb
        loss, _, _ = hinge_loss_and_subgrad(w, b, train.X, train.y, hyper.l2)
        if not np.isfinite(loss):
            raise NonFiniteLossError(f"svm loss became {loss}; lower the learning rate")
    return w, b


def train_linear_svm(train: Dataset, hyper: SVMHyper = SVMHyper()) -> LinearSVMModel:
    rng = np.random.default_rng(hyper.seed)
    neg, pos = train.class_counts()
    calibratable = neg >= 3 and pos >= 3
    if calibratable:
        fit_part, calib_part = split_train_test(
            train, ratio=hyper.calib_ratio, seed=hyper.seed, stratified=True
        )
    else:
        fit_part, calib_part = train, None
    w, b = _descend(fit_part, hyper, rng)
    if calib_part is not None and len(set(calib_part.y)) == 2:
        margins = calib_part.X @ w + b
        a, c = _fit_platt(margins, calib_part.y.astype(np.float64))
        a = max(a, 1e-6)  # probabilities must stay monotone in the margin
    else:
        a, c = 1.0, 0.0
    return LinearSVMModel(w=w, b=b, calib_a=a, calib_c=c, hyper=hyper)
