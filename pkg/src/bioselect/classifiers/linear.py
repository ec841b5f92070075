"""Logistic regression and a linear SVM, both trained from scratch.

Logistic regression runs full-batch gradient descent on cross-entropy from
a zero initialization, which makes its loss sequence deterministic and
(at this step size on normalized data) non-increasing. The SVM uses the
Pegasos primal subgradient method with a bias folded in as a constant
feature; its only randomness is the per-epoch visit order.
"""

from __future__ import annotations

import numpy as np

from ..dataset import seeded_rng

_EPS = 1e-12


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def bce_loss(p: np.ndarray, y: np.ndarray) -> float:
    p = np.clip(p, _EPS, 1.0 - _EPS)
    return float(-(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)).mean())


class LogisticRegressionClassifier:
    def __init__(
        self,
        learning_rate: float = 0.1,
        max_epochs: int = 1000,
        tol: float = 1e-6,
    ):
        self.learning_rate = learning_rate
        self.max_epochs = max_epochs
        self.tol = tol
        self.weights_: np.ndarray | None = None
        self.bias_ = 0.0
        self.loss_history_: list[float] = []
        self.train_cycles_ = 0

    def fit(self, X: np.ndarray, y: np.ndarray, seed: int = 0) -> "LogisticRegressionClassifier":
        X = np.asarray(X, dtype=np.float64)
        yf = np.asarray(y, dtype=np.float64)
        n = X.shape[0]
        w = np.zeros(X.shape[1])
        b = 0.0
        self.loss_history_ = [bce_loss(_sigmoid(X @ w + b), yf)]
        prev = self.loss_history_[0]
        epochs = 0
        for _ in range(self.max_epochs):
            p = _sigmoid(X @ w + b)
            g = (p - yf) / n
            w -= self.learning_rate * (X.T @ g)
            b -= self.learning_rate * float(g.sum())
            epochs += 1
            loss = bce_loss(_sigmoid(X @ w + b), yf)
            self.loss_history_.append(loss)
            if abs(prev - loss) < self.tol:
                break
            prev = loss
        self.weights_, self.bias_ = w, b
        self.train_cycles_ = epochs
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        if self.weights_ is None:
            raise ValueError("predict called before fit")
        return _sigmoid(np.asarray(X, dtype=np.float64) @ self.weights_ + self.bias_)

    def predict(self, X: np.ndarray) -> np.ndarray:
        return (self.predict_proba(X) > 0.5).astype(np.int8)


class LinearSvmClassifier:
    """Pegasos-trained linear SVM with hinge loss and L2 regularization."""

    def __init__(self, lam: float = 1e-3, epochs: int = 1000):
        self.lam = lam
        self.epochs = epochs
        self.weights_: np.ndarray | None = None
        self.train_cycles_ = 0

    def fit(self, X: np.ndarray, y: np.ndarray, seed: int = 0) -> "LinearSvmClassifier":
        X = np.asarray(X, dtype=np.float64)
        s = np.where(np.asarray(y) == 1, 1.0, -1.0)
        Xb = np.hstack([X, np.ones((X.shape[0], 1))])
        w = np.zeros(Xb.shape[1])
        rng = seeded_rng(seed, 41)
        t = 1
        for _ in range(self.epochs):
            for i in rng.permutation(Xb.shape[0]):
                eta = 1.0 / (self.lam * t)
                margin = s[i] * float(Xb[i] @ w)
                w *= 1.0 - eta * self.lam
                if margin < 1.0:
                    w += eta * s[i] * Xb[i]
                t += 1
        self.weights_ = w
        self.train_cycles_ = self.epochs
        return self

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        if self.weights_ is None:
            raise ValueError("predict called before fit")
        X = np.asarray(X, dtype=np.float64)
        Xb = np.hstack([X, np.ones((X.shape[0], 1))])
        return Xb @ self.weights_

    def predict(self, X: np.ndarray) -> np.ndarray:
        return (self.decision_function(X) > 0).astype(np.int8)

    def objective(self, X: np.ndarray, y: np.ndarray) -> float:
        """Regularized hinge objective, exposed for convergence checks."""
        if self.weights_ is None:
            raise ValueError("objective requires a fitted model")
        s = np.where(np.asarray(y) == 1, 1.0, -1.0)
        Xb = np.hstack([np.asarray(X, dtype=np.float64), np.ones((X.shape[0], 1))])
        hinge = np.maximum(0.0, 1.0 - s * (Xb @ self.weights_)).mean()
        return 0.5 * self.lam * float(self.weights_ @ self.weights_) + float(hinge)
