"""CART-style decision tree and a bagged random forest built on it.

Trees split on the Gini criterion with thresholds at midpoints between
consecutive distinct values of a feature; a row goes left when
value <= threshold. Growth stops only at pure nodes or nodes below the
minimum split size, so depth is unbounded. Leaf and vote ties resolve to
class 0; equal-quality splits resolve to the lowest feature index, then
the lowest threshold.
"""

from __future__ import annotations

import numpy as np

from ..dataset import seeded_rng


class _Node:
    __slots__ = ("feature", "threshold", "left", "right", "label")

    def __init__(self):
        self.feature = -1
        self.threshold = 0.0
        self.left: "_Node | None" = None
        self.right: "_Node | None" = None
        self.label = -1


def _majority(y: np.ndarray) -> int:
    ones = int(y.sum())
    return 1 if ones * 2 > y.size else 0


def _best_split(
    X: np.ndarray, y: np.ndarray, features: np.ndarray
) -> tuple[int, float] | None:
    """Lowest weighted child Gini over candidate thresholds, or None."""
    n = y.size
    best_score = np.inf
    best: tuple[int, float] | None = None
    for j in features:
        order = np.argsort(X[:, j], kind="stable")
        vs = X[order, j]
        cum1 = np.cumsum(y[order])
        boundary = np.flatnonzero(vs[:-1] < vs[1:])
        if boundary.size == 0:
            continue
        nl = boundary + 1.0
        nr = n - nl
        l1 = cum1[boundary].astype(np.float64)
        r1 = cum1[-1] - l1
        gini_l = 1.0 - (l1 / nl) ** 2 - ((nl - l1) / nl) ** 2
        gini_r = 1.0 - (r1 / nr) ** 2 - ((nr - r1) / nr) ** 2
        weighted = (nl * gini_l + nr * gini_r) / n
        i = int(np.argmin(weighted))
        if weighted[i] < best_score:
            best_score = float(weighted[i])
            cut = boundary[i]
            best = (int(j), float((vs[cut] + vs[cut + 1]) / 2.0))
    return best


class DecisionTreeClassifier:
    """Binary CART tree.

    ``max_features`` limits the columns examined per node to a fresh random
    subset (forest mode); None examines every column and needs no rng.
    """

    def __init__(self, min_samples_split: int = 2, max_features: int | None = None):
        self.min_samples_split = min_samples_split
        self.max_features = max_features
        self._root: _Node | None = None
        self.train_cycles_ = 1

    def fit(
        self,
        X: np.ndarray,
        y: np.ndarray,
        seed: int = 0,
        rng: np.random.Generator | None = None,
    ) -> "DecisionTreeClassifier":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int8)
        if self.max_features is not None and rng is None:
            rng = seeded_rng(seed, 31)
        self._root = self._grow(X, y, rng)
        return self

    def _grow(
        self, X: np.ndarray, y: np.ndarray, rng: np.random.Generator | None
    ) -> _Node:
        node = _Node()
        ones = int(y.sum())
        if ones == 0 or ones == y.size or y.size < self.min_samples_split:
            node.label = _majority(y)
            return node
        if self.max_features is None:
            features = np.arange(X.shape[1])
        else:
            m = min(self.max_features, X.shape[1])
            features = np.sort(rng.choice(X.shape[1], size=m, replace=False))
        found = _best_split(X, y, features)
        if found is None:
            node.label = _majority(y)
            return node
        node.feature, node.threshold = found
        go_left = X[:, node.feature] <= node.threshold
        node.left = self._grow(X[go_left], y[go_left], rng)
        node.right = self._grow(X[~go_left], y[~go_left], rng)
        return node

    def predict(self, X: np.ndarray) -> np.ndarray:
        if self._root is None:
            raise ValueError("predict called before fit")
        X = np.asarray(X, dtype=np.float64)
        out = np.empty(X.shape[0], dtype=np.int8)
        for i in range(X.shape[0]):
            node = self._root
            while node.label < 0:
                node = node.left if X[i, node.feature] <= node.threshold else node.right
            out[i] = node.label
        return out


class RandomForestClassifier:
    """Majority vote over bootstrapped Gini trees with sqrt-feature sampling.

    Each tree draws its bootstrap sample and its per-node feature subsets
    from a generator keyed by (seed, tree index), so forests are
    reproducible independently of evaluation order. With trees=1,
    bootstrap=False, and full features the forest matches a plain tree.
    """

    def __init__(
        self,
        trees: int = 50,
        bootstrap: bool = True,
        max_features: str | int | None = "sqrt",
        min_samples_split: int = 2,
    ):
        if trees < 1:
            raise ValueError("trees must be at least 1")
        self.trees = trees
        self.bootstrap = bootstrap
        self.max_features = max_features
        self.min_samples_split = min_samples_split
        self._members: list[DecisionTreeClassifier] = []
        self.train_cycles_ = 1

    def _features_per_node(self, n_features: int) -> int | None:
        if self.max_features is None:
            return None
        if self.max_features == "sqrt":
            return max(1, int(np.sqrt(n_features)))
        return int(self.max_features)

    def fit(self, X: np.ndarray, y: np.ndarray, seed: int = 0) -> "RandomForestClassifier":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int8)
        m = self._features_per_node(X.shape[1])
        self._members = []
        for t in range(self.trees):
            rng = seeded_rng(seed, 37, t)
            if self.bootstrap:
                idx = rng.integers(0, X.shape[0], size=X.shape[0])
                Xt, yt = X[idx], y[idx]
            else:
                Xt, yt = X, y
            tree = DecisionTreeClassifier(
                min_samples_split=self.min_samples_split, max_features=m
            )
            tree.fit(Xt, yt, rng=rng if m is not None else None)
            self._members.append(tree)
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        if not self._members:
            raise ValueError("predict called before fit")
        votes = np.zeros(np.asarray(X).shape[0], dtype=np.int64)
        for tree in self._members:
            votes += tree.predict(X)
        return (votes * 2 > len(self._members)).astype(np.int8)
