"""Small fully-connected network with logistic units throughout.

The default shape is input -> 10 -> 10 -> 1. Training is full-batch
gradient descent on cross-entropy; ``train_cycles_`` records how many
epochs ran before the loss change fell under tolerance, which the
benchmark reports as training cycles. ``loss`` and ``gradients`` expose
the internals so the backward pass can be checked against finite
differences.
"""

from __future__ import annotations

import numpy as np

from ..dataset import seeded_rng
from .linear import _sigmoid, bce_loss


class MlpClassifier:
    def __init__(
        self,
        hidden: tuple[int, ...] = (10, 10),
        learning_rate: float = 0.3,
        max_epochs: int = 5000,
        tol: float = 1e-5,
    ):
        self.hidden = tuple(hidden)
        self.learning_rate = learning_rate
        self.max_epochs = max_epochs
        self.tol = tol
        self.weights_: list[np.ndarray] = []
        self.biases_: list[np.ndarray] = []
        self.loss_history_: list[float] = []
        self.train_cycles_ = 0

    def init_params(self, n_features: int, seed: int = 0) -> None:
        sizes = [n_features, *self.hidden, 1]
        rng = seeded_rng(seed, 43)
        self.weights_ = [
            rng.normal(0.0, 1.0 / np.sqrt(sizes[i]), size=(sizes[i], sizes[i + 1]))
            for i in range(len(sizes) - 1)
        ]
        self.biases_ = [np.zeros(sizes[i + 1]) for i in range(len(sizes) - 1)]

    def _forward(self, X: np.ndarray) -> list[np.ndarray]:
        acts = [X]
        for W, b in zip(self.weights_, self.biases_):
            acts.append(_sigmoid(acts[-1] @ W + b))
        return acts

    def loss(self, X: np.ndarray, y: np.ndarray) -> float:
        p = self._forward(np.asarray(X, dtype=np.float64))[-1][:, 0]
        return bce_loss(p, np.asarray(y, dtype=np.float64))

    def gradients(
        self, X: np.ndarray, y: np.ndarray
    ) -> tuple[list[np.ndarray], list[np.ndarray]]:
        """Analytic cross-entropy gradients at the current parameters."""
        X = np.asarray(X, dtype=np.float64)
        yf = np.asarray(y, dtype=np.float64)
        acts = self._forward(X)
        n = X.shape[0]
        # sigmoid output + cross-entropy collapse to (p - y) at the last layer
        delta = (acts[-1] - yf[:, None]) / n
        dW: list[np.ndarray] = [np.empty(0)] * len(self.weights_)
        db: list[np.ndarray] = [np.empty(0)] * len(self.biases_)
        for layer in range(len(self.weights_) - 1, -1, -1):
            dW[layer] = acts[layer].T @ delta
            db[layer] = delta.sum(axis=0)
            if layer > 0:
                a = acts[layer]
                delta = (delta @ self.weights_[layer].T) * a * (1.0 - a)
        return dW, db

    def fit(self, X: np.ndarray, y: np.ndarray, seed: int = 0) -> "MlpClassifier":
        X = np.asarray(X, dtype=np.float64)
        yf = np.asarray(y, dtype=np.float64)
        if not self.weights_:
            self.init_params(X.shape[1], seed)
        prev = self.loss(X, yf)
        self.loss_history_ = [prev]
        epochs = 0
        for _ in range(self.max_epochs):
            dW, db = self.gradients(X, yf)
            for layer in range(len(self.weights_)):
                self.weights_[layer] -= self.learning_rate * dW[layer]
                self.biases_[layer] -= self.learning_rate * db[layer]
            epochs += 1
            loss = self.loss(X, yf)
            self.loss_history_.append(loss)
            if abs(prev - loss) < self.tol:
                break
            prev = loss
        self.train_cycles_ = epochs
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        if not self.weights_:
            raise ValueError("predict called before fit")
        return self._forward(np.asarray(X, dtype=np.float64))[-1][:, 0]

    def predict(self, X: np.ndarray) -> np.ndarray:
        return (self.predict_proba(X) > 0.5).astype(np.int8)
