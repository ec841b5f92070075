"""From-scratch classifiers behind one fit/predict entry point.

``fit`` builds a model from a :class:`ClassifierSpec`, times the training
call, and reports training cycles (gradient epochs for iterative models,
1 for lazy and tree learners) so the benchmark can compare both quality
and cost across feature subsets.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..dataset import Dataset
from .knn import KnnClassifier, knn_predict
from .linear import LinearSvmClassifier, LogisticRegressionClassifier
from .metrics import ConfusionMatrix, Metrics, confusion, metrics_from_confusion, score
from .mlp import MlpClassifier
from .tree import DecisionTreeClassifier, RandomForestClassifier

KINDS = ("knn", "tree", "forest", "logreg", "svm", "mlp")


@dataclass(frozen=True)
class ClassifierSpec:
    """A classifier kind plus keyword overrides for its constructor."""

    kind: str
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown classifier kind {self.kind!r}; expected one of {KINDS}")

    def build(self):
        cls = {
            "knn": KnnClassifier,
            "tree": DecisionTreeClassifier,
            "forest": RandomForestClassifier,
            "logreg": LogisticRegressionClassifier,
            "svm": LinearSvmClassifier,
            "mlp": MlpClassifier,
        }[self.kind]
        return cls(**self.params)


def default_specs() -> tuple[ClassifierSpec, ...]:
    """The benchmark's classifier roster with its baseline settings."""
    return (
        ClassifierSpec("knn", {"k": 10}),
        ClassifierSpec("tree"),
        ClassifierSpec("forest", {"trees": 50}),
        ClassifierSpec("logreg"),
        ClassifierSpec("svm"),
        ClassifierSpec("mlp", {"hidden": (10, 10)}),
    )


@dataclass
class FitResult:
    model: Any
    spec: ClassifierSpec
    train_time: float
    train_cycles: int


def fit(spec: ClassifierSpec, train: Dataset, seed: int = 0) -> FitResult:
    """Train one classifier on a dataset, timing the call."""
    if train.n_rows == 0:
        raise ValueError("cannot fit on an empty dataset")
    if np.isnan(train.X).any():
        raise ValueError("cannot fit with missing values; impute first")
    model = spec.build()
    start = time.perf_counter()
    model.fit(train.X, train.y, seed=seed)
    elapsed = time.perf_counter() - start
    return FitResult(
        model=model,
        spec=spec,
        train_time=elapsed,
        train_cycles=int(getattr(model, "train_cycles_", 1)),
    )


def predict(result: FitResult, data: Dataset) -> np.ndarray:
    return result.model.predict(data.X)


def evaluate(result: FitResult, data: Dataset) -> Metrics:
    return score(data.y, predict(result, data))


__all__ = [
    "ClassifierSpec",
    "FitResult",
    "KINDS",
    "KnnClassifier",
    "DecisionTreeClassifier",
    "RandomForestClassifier",
    "LogisticRegressionClassifier",
    "LinearSvmClassifier",
    "MlpClassifier",
    "ConfusionMatrix",
    "Metrics",
    "confusion",
    "metrics_from_confusion",
    "score",
    "knn_predict",
    "default_specs",
    "fit",
    "predict",
    "evaluate",
]
