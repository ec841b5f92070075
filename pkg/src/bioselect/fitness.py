"""Wrapper fitness: KNN accuracy traded against feature-subset size.

A candidate mask is scored as

    fitness = alpha * accuracy + (1 - alpha) * (1 - selected / total)

so that with equal accuracy, subsets using fewer features score higher.
``maximize_reduction=False`` switches the second term to selected / total
for comparison runs. Accuracy comes from a KNN classifier evaluated on an
internal validation protocol (a seeded stratified holdout by default, or
k-fold) that is fixed per evaluator, so every mask is judged on the same
rows. Evaluations are cached by mask and configuration; the cache is pure
memoization and can never change a returned value.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .classifiers.knn import knn_predict
from .classifiers.metrics import score
from .dataset import Dataset, FeatureMask, SplitSpec, split


@dataclass(frozen=True)
class Holdout:
    """Stratified single split: train on ``fraction``, validate on the rest."""

    fraction: float = 0.7
    seed: int = 0


@dataclass(frozen=True)
class KFold:
    """Seeded shuffle chopped into folds; accuracy is averaged over folds."""

    folds: int = 5
    seed: int = 0

    def __post_init__(self) -> None:
        if self.folds < 2:
            raise ValueError("k-fold validation needs at least 2 folds")


@dataclass(frozen=True)
class FitnessConfig:
    alpha: float = 0.99
    evaluator_k: int = 10
    validation: Holdout | KFold = Holdout()
    maximize_reduction: bool = True

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.evaluator_k < 1:
            raise ValueError("evaluator_k must be at least 1")


@dataclass(frozen=True)
class FitnessValue:
    fitness: float
    accuracy: float
    selected: int
    n_features: int

    def reduction_pct(self) -> float:
        return 100.0 * (1.0 - self.selected / self.n_features)


def fitness_score(
    accuracy: float, selected: int, n_features: int, cfg: FitnessConfig
) -> float:
    """The scoring arithmetic alone, for direct checking."""
    ratio = selected / n_features
    size_term = ratio if not cfg.maximize_reduction else 1.0 - ratio
    return cfg.alpha * accuracy + (1.0 - cfg.alpha) * size_term


class FitnessEvaluator:
    """Scores feature masks against one dataset and one validation protocol.

    The validation partition is drawn once at construction; repeated calls
    with the same mask hit an internal cache keyed by the mask bits and the
    full configuration, plus a digest of the data. ``calls`` and
    ``computes`` count total requests and actual evaluations so cache
    behavior is observable.
    """

    def __init__(self, train: Dataset, config: FitnessConfig | None = None):
        self.config = config or FitnessConfig()
        if np.isnan(train.X).any():
            raise ValueError("fitness evaluation requires imputed (complete) data")
        if train.n_rows < 2:
            raise ValueError("fitness evaluation needs at least 2 rows")
        self.n_features = train.n_features
        self._folds: list[tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]] = []
        val = self.config.validation
        if isinstance(val, Holdout):
            fit_part, val_part = split(
                train, SplitSpec(fraction=val.fraction, seed=val.seed, stratified=True)
            )
            self._folds.append(
                (
                    np.ascontiguousarray(fit_part.X),
                    fit_part.y,
                    np.ascontiguousarray(val_part.X),
                    val_part.y,
                )
            )
        else:
            if train.n_rows < val.folds:
                raise ValueError(
                    f"{val.folds}-fold validation needs at least {val.folds} rows"
                )
            rng = np.random.default_rng(
                np.random.SeedSequence([val.seed & ((1 << 64) - 1), 13])
            )
            perm = rng.permutation(train.n_rows)
            for part in np.array_split(perm, val.folds):
                rest = np.setdiff1d(perm, part)
                self._folds.append(
                    (
                        np.ascontiguousarray(train.X[rest]),
                        train.y[rest],
                        np.ascontiguousarray(train.X[part]),
                        train.y[part],
                    )
                )
        digest = hashlib.blake2b(digest_size=8)
        digest.update(np.ascontiguousarray(train.X).tobytes())
        digest.update(train.y.tobytes())
        self._fingerprint = digest.digest()
        self._cache: dict[tuple, FitnessValue] = {}
        self.calls = 0
        self.computes = 0

    def _key(self, bits: np.ndarray) -> tuple:
        return (
            bits.tobytes(),
            self.config.alpha,
            self.config.evaluator_k,
            self.config.validation,
            self.config.maximize_reduction,
            self._fingerprint,
        )

    def _accuracy(self, cols: np.ndarray) -> float:
        accs = []
        for Xf, yf, Xv, yv in self._folds:
            pred = knn_predict(Xf[:, cols], yf, Xv[:, cols], self.config.evaluator_k)
            accs.append(score(yv, pred).accuracy)
        return float(np.mean(accs))

    def evaluate_bits(self, bits: np.ndarray) -> FitnessValue:
        """Score a 0/1 uint8 vector; the fast path the optimizers call."""
        self.calls += 1
        key = self._key(bits)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        selected = int(bits.sum())
        if bits.size != self.n_features:
            raise ValueError(f"mask length {bits.size} != {self.n_features} features")
        if selected == 0:
            raise ValueError("cannot score a mask that selects no features")
        self.computes += 1
        acc = self._accuracy(np.flatnonzero(bits))
        value = FitnessValue(
            fitness=fitness_score(acc, selected, self.n_features, self.config),
            accuracy=acc,
            selected=selected,
            n_features=self.n_features,
        )
        self._cache[key] = value
        return value

    def evaluate(self, mask: FeatureMask) -> FitnessValue:
        return self.evaluate_bits(mask.bits)


def evaluate(
    mask: FeatureMask, train: Dataset, config: FitnessConfig | None = None
) -> FitnessValue:
    """One-shot convenience wrapper around a throwaway evaluator."""
    return FitnessEvaluator(train, config).evaluate(mask)


def all_masks(n_features: int) -> Iterator[np.ndarray]:
    """Every nonempty mask over n features, in ascending integer order.

    Bit i of the integer is feature i, so mask 1 selects only feature 0.
    """
    for m in range(1, 1 << n_features):
        yield ((m >> np.arange(n_features)) & 1).astype(np.uint8)


def brute_force_best(
    train: Dataset | None = None,
    config: FitnessConfig | None = None,
    max_n: int = 16,
    evaluator: FitnessEvaluator | None = None,
    collect: Callable[[np.ndarray, FitnessValue], None] | None = None,
) -> tuple[FeatureMask, FitnessValue]:
    """Exhaustively score every nonempty mask and return the best.

    Ties prefer fewer selected features, then the lexicographically
    smallest bit vector. Refuses feature counts above ``max_n`` because the
    search is exponential. Pass an existing evaluator to share its cache;
    ``collect`` receives every (bits, value) pair for enumeration dumps.
    """
    if evaluator is None:
        if train is None:
            raise ValueError("need a dataset or an evaluator")
        evaluator = FitnessEvaluator(train, config)
    n = evaluator.n_features
    if n > max_n:
        raise ValueError(
            f"{n} features means {2**n - 1} masks; raise max_n above {max_n} to allow"
        )
    best_bits: np.ndarray | None = None
    best_value: FitnessValue | None = None
    best_key: tuple | None = None
    for bits in all_masks(n):
        value = evaluator.evaluate_bits(bits)
        if collect is not None:
            collect(bits, value)
        key = (-value.fitness, value.selected, tuple(int(b) for b in bits))
        if best_key is None or key < best_key:
            best_key, best_bits, best_value = key, bits, value
    assert best_bits is not None and best_value is not None
    return FeatureMask(best_bits), best_value
