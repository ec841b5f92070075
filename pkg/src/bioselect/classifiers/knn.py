"""K-nearest-neighbors classifier on Euclidean distance.

Majority vote over the k closest training rows; vote ties go to class 0
and distance ties go to the lower training-row index. k is clamped to the
training-set size, so tiny folds degrade gracefully instead of failing.
"""

from __future__ import annotations

import numpy as np

_CHUNK = 256


def knn_predict(
    X_train: np.ndarray, y_train: np.ndarray, X_test: np.ndarray, k: int
) -> np.ndarray:
    """Predict labels for X_test rows; the shared kernel for class and fitness."""
    n = X_train.shape[0]
    kk = min(k, n)
    out = np.empty(X_test.shape[0], dtype=np.int8)
    for start in range(0, X_test.shape[0], _CHUNK):
        chunk = X_test[start : start + _CHUNK]
        diff = chunk[:, None, :] - X_train[None, :, :]
        d2 = np.einsum("cnd,cnd->cn", diff, diff)
        near = np.argsort(d2, axis=1, kind="stable")[:, :kk]
        ones = y_train[near].astype(np.int64).sum(axis=1)
        out[start : start + _CHUNK] = (ones * 2 > kk).astype(np.int8)
    return out


class KnnClassifier:
    def __init__(self, k: int = 10):
        if k < 1:
            raise ValueError("k must be at least 1")
        self.k = k
        self._X: np.ndarray | None = None
        self._y: np.ndarray | None = None
        self.train_cycles_ = 1

    def fit(self, X: np.ndarray, y: np.ndarray, seed: int = 0) -> "KnnClassifier":
        self._X = np.ascontiguousarray(X, dtype=np.float64)
        self._y = np.asarray(y, dtype=np.int8)
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        if self._X is None or self._y is None:
            raise ValueError("predict called before fit")
        return knn_predict(self._X, self._y, np.asarray(X, dtype=np.float64), self.k)
