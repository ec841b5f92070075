"""Confusion counts and the four headline metrics for binary labels.

Label 1 is the positive class throughout. Ratios with a zero denominator
are reported as 0 rather than raising, so degenerate predictions still
produce a full metrics row.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class Metrics:
    accuracy: float
    precision: float
    recall: float
    f1: float

    def as_dict(self) -> dict[str, float]:
        return {
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
        }


def confusion(y_true: np.ndarray, y_pred: np.ndarray) -> ConfusionMatrix:
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape:
        raise ValueError("y_true and y_pred must have the same length")
    if y_true.size == 0:
        raise ValueError("cannot score an empty prediction set")
    return ConfusionMatrix(
        tp=int(((y_true == 1) & (y_pred == 1)).sum()),
        fp=int(((y_true == 0) & (y_pred == 1)).sum()),
        fn=int(((y_true == 1) & (y_pred == 0)).sum()),
        tn=int(((y_true == 0) & (y_pred == 0)).sum()),
    )


def metrics_from_confusion(cm: ConfusionMatrix) -> Metrics:
    acc = (cm.tp + cm.tn) / cm.total
    prec = cm.tp / (cm.tp + cm.fp) if (cm.tp + cm.fp) else 0.0
    rec = cm.tp / (cm.tp + cm.fn) if (cm.tp + cm.fn) else 0.0
    f1 = 2 * prec * rec / (prec + rec) if (prec + rec) else 0.0
    return Metrics(accuracy=acc, precision=prec, recall=rec, f1=f1)


def score(y_true: np.ndarray, y_pred: np.ndarray) -> Metrics:
    return metrics_from_confusion(confusion(y_true, y_pred))
