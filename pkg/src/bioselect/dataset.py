"""Tabular dataset loading, feature masks, and train/test splitting.

A :class:`Dataset` is an immutable pair of a float64 feature matrix and an
int8 binary label vector. Missing values are carried explicitly as NaN so
that downstream stages can never confuse "absent" with "zero". Categorical
columns are encoded to integer codes by sorted token order, which keeps the
encoding independent of row order.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

MISSING = np.nan
DEFAULT_MISSING_TOKENS = ("", "?", "NaN")

_SEED_MASK = (1 << 64) - 1


def seeded_rng(seed: int, *stream: int) -> np.random.Generator:
    """Build a generator from a user seed plus integer stream tags.

    Every random draw in the package flows through this so that a single
    (seed, tags...) tuple pins the stream regardless of platform.
    """
    return np.random.default_rng(np.random.SeedSequence([seed & _SEED_MASK, *stream]))


def is_missing(values: np.ndarray) -> np.ndarray:
    """Boolean mask of missing entries."""
    return np.isnan(values)


@dataclass(frozen=True)
class Dataset:
    """Immutable feature matrix plus binary labels.

    Attributes:
        X: float64 array of shape (rows, features). NaN marks missing.
        y: int8 array of shape (rows,) with values in {0, 1}.
        feature_names: one name per column of X.
        source: free-form provenance string (file path or a transform tag).
        row_ids: optional int64 identity per row, preserved by transforms
            that keep rows and set to -1 for synthesized rows. Used by the
            harness to assert train/test separation.
    """

    X: np.ndarray
    y: np.ndarray
    feature_names: tuple[str, ...]
    source: str = ""
    row_ids: np.ndarray | None = None

    def __post_init__(self) -> None:
        X = np.asarray(self.X, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.int8)
        if X.ndim != 2:
            raise ValueError(f"X must be 2-dimensional, got shape {X.shape}")
        if y.shape != (X.shape[0],):
            raise ValueError(f"y shape {y.shape} does not match {X.shape[0]} rows")
        if X.shape[1] != len(self.feature_names):
            raise ValueError(
                f"{len(self.feature_names)} feature names for {X.shape[1]} columns"
            )
        labels = np.unique(y)
        if labels.size and not np.isin(labels, [0, 1]).all():
            raise ValueError(f"labels must be 0 or 1, found {labels.tolist()}")
        ids = self.row_ids
        if ids is not None:
            ids = np.asarray(ids, dtype=np.int64)
            if ids.shape != (X.shape[0],):
                raise ValueError("row_ids length does not match rows")
            ids.setflags(write=False)
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "row_ids", ids)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @property
    def n_rows(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    def class_counts(self) -> dict[int, int]:
        return {int(c): int(n) for c, n in zip(*np.unique(self.y, return_counts=True))}

    def with_ids(self) -> "Dataset":
        """Attach fresh 0..n-1 row identities (no-op if already present)."""
        if self.row_ids is not None:
            return self
        return replace(self, row_ids=np.arange(self.n_rows, dtype=np.int64))

    def take(self, indices: np.ndarray, source: str | None = None) -> "Dataset":
        idx = np.asarray(indices, dtype=np.intp)
        return Dataset(
            X=self.X[idx],
            y=self.y[idx],
            feature_names=self.feature_names,
            source=self.source if source is None else source,
            row_ids=None if self.row_ids is None else self.row_ids[idx],
        )


class FeatureMask:
    """Binary inclusion vector over the columns of a dataset.

    The canonical in-memory form is a uint8 array of 0/1 values. Masks are
    hashable and compare by content, so they can key caches directly.
    """

    __slots__ = ("bits",)

    def __init__(self, bits: Iterable[int] | np.ndarray):
        arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits)
        arr = arr.astype(np.uint8, copy=True)
        if arr.ndim != 1:
            raise ValueError("mask must be 1-dimensional")
        if not np.isin(arr, [0, 1]).all():
            raise ValueError("mask entries must be 0 or 1")
        arr.setflags(write=False)
        self.bits = arr

    @classmethod
    def ones(cls, n: int) -> "FeatureMask":
        return cls(np.ones(n, dtype=np.uint8))

    @property
    def n(self) -> int:
        return self.bits.size

    @property
    def popcount(self) -> int:
        return int(self.bits.sum())

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    def reduction(self) -> float:
        """Fraction of features dropped, in [0, 1]."""
        return 1.0 - self.popcount / self.n

    def tobytes(self) -> bytes:
        return self.bits.tobytes()

    def tolist(self) -> list[int]:
        return [int(b) for b in self.bits]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FeatureMask):
            return NotImplemented
        return self.bits.shape == other.bits.shape and bool(
            (self.bits == other.bits).all()
        )

    def __hash__(self) -> int:
        return hash(self.bits.tobytes())

    def __repr__(self) -> str:
        return f"FeatureMask({''.join(str(int(b)) for b in self.bits)})"


def project(d: Dataset, mask: FeatureMask) -> Dataset:
    """Restrict a dataset to the columns selected by ``mask``.

    The mask must match the feature count and select at least one column;
    an empty projection has no meaning for any downstream consumer.
    """
    if mask.n != d.n_features:
        raise ValueError(f"mask length {mask.n} != {d.n_features} features")
    if mask.popcount == 0:
        raise ValueError("mask selects no features")
    keep = mask.indices()
    return Dataset(
        X=d.X[:, keep],
        y=d.y,
        feature_names=tuple(d.feature_names[i] for i in keep),
        source=d.source,
        row_ids=d.row_ids,
    )


@dataclass(frozen=True)
class SplitSpec:
    """Train/test split request.

    ``fraction`` is the train share of rows; the train size is
    round(fraction * rows). Stratified splits preserve per-class counts to
    within one row using largest-remainder apportionment.
    """

    fraction: float = 0.7
    seed: int = 0
    stratified: bool = True

    def __post_init__(self) -> None:
        if not 0.0 < self.fraction < 1.0:
            raise ValueError(f"fraction must be in (0, 1), got {self.fraction}")


def split(d: Dataset, spec: SplitSpec) -> tuple[Dataset, Dataset]:
    """Partition rows into disjoint train and test datasets."""
    n = d.n_rows
    target = int(round(spec.fraction * n))
    rng = seeded_rng(spec.seed, 11)
    if spec.stratified:
        classes, counts = np.unique(d.y, return_counts=True)
        if (counts < 2).any():
            raise ValueError(
                "too few rows for stratification: every class needs at least 2 rows"
            )
        exact = spec.fraction * counts
        base = np.floor(exact).astype(int)
        leftover = target - int(base.sum())
        if leftover < 0 or leftover > classes.size:
            # round() and floor() disagree by at most one per class
            raise ValueError("stratified apportionment failed; check fraction")
        order = sorted(range(classes.size), key=lambda i: (-(exact[i] - base[i]), i))
        take = base.copy()
        for i in order[:leftover]:
            take[i] += 1
        train_idx: list[np.ndarray] = []
        test_idx: list[np.ndarray] = []
        for c, t in zip(classes, take):
            rows = np.flatnonzero(d.y == c)
            perm = rng.permutation(rows)
            train_idx.append(perm[:t])
            test_idx.append(perm[t:])
        tr = np.sort(np.concatenate(train_idx))
        te = np.sort(np.concatenate(test_idx))
    else:
        perm = rng.permutation(n)
        tr = np.sort(perm[:target])
        te = np.sort(perm[target:])
    if tr.size == 0 or te.size == 0:
        raise ValueError(
            f"split of {n} rows at fraction {spec.fraction} leaves a side empty"
        )
    return d.take(tr), d.take(te)


def _parse_cell(token: str) -> float | None:
    """Parse one CSV cell as a float; None means not numeric."""
    try:
        return float(token)
    except ValueError:
        return None


def load_csv(
    path: str | Path,
    label_column: str = "diagnosis",
    missing_tokens: Sequence[str] = DEFAULT_MISSING_TOKENS,
) -> Dataset:
    """Load a headered CSV into a Dataset.

    Columns where every present cell parses as a number become float
    features; anything else is treated as categorical and encoded by the
    sorted order of its distinct tokens. The label column must coerce to
    {0, 1} after the same treatment and may not contain missing values.
    Cells are stripped of surrounding whitespace before interpretation.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: file is empty") from None
        header = [h.strip() for h in header]
        rows = [[c.strip() for c in row] for row in reader if row]
    if not rows:
        raise ValueError(f"{path}: no data rows")
    if label_column not in header:
        raise ValueError(f"{path}: label column {label_column!r} not in header")
    if len(set(header)) != len(header):
        raise ValueError(f"{path}: duplicate column names in header")
    width = len(header)
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ValueError(f"{path}: row {i + 2} has {len(row)} cells, expected {width}")

    missing = set(missing_tokens)
    columns: list[np.ndarray] = []
    for j, name in enumerate(header):
        raw = [row[j] for row in rows]
        parsed = [None if tok in missing else _parse_cell(tok) for tok in raw]
        numeric = all(p is not None for tok, p in zip(raw, parsed) if tok not in missing)
        if numeric:
            col = np.array(
                [MISSING if p is None or math.isnan(p) else p for p in parsed],
                dtype=np.float64,
            )
        else:
            tokens = sorted({tok for tok in raw if tok not in missing})
            code = {tok: float(i) for i, tok in enumerate(tokens)}
            col = np.array(
                [MISSING if tok in missing else code[tok] for tok in raw],
                dtype=np.float64,
            )
        columns.append(col)

    label_j = header.index(label_column)
    label_col = columns[label_j]
    if np.isnan(label_col).any():
        raise ValueError(f"{path}: label column {label_column!r} has missing values")
    if not np.isin(label_col, [0.0, 1.0]).all():
        bad = sorted(set(label_col.tolist()) - {0.0, 1.0})
        raise ValueError(
            f"{path}: label column {label_column!r} must be binary, found {bad}"
        )
    feature_idx = [j for j in range(width) if j != label_j]
    X = np.column_stack([columns[j] for j in feature_idx]) if feature_idx else np.empty((len(rows), 0))
    if X.shape[1] == 0:
        raise ValueError(f"{path}: no feature columns besides the label")
    return Dataset(
        X=X,
        y=label_col.astype(np.int8),
        feature_names=tuple(header[j] for j in feature_idx),
        source=str(path),
    )


def save_csv(d: Dataset, path: str | Path, label_column: str = "diagnosis") -> None:
    """Write a Dataset back to CSV.

    Floats are written with repr so a load/save/load round trip preserves
    finite values bit-exactly. Missing entries become empty cells.
    """
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(d.feature_names) + [label_column])
        for i in range(d.n_rows):
            cells = [
                "" if np.isnan(v) else repr(float(v)) for v in d.X[i]
            ]
            cells.append(str(int(d.y[i])))
            writer.writerow(cells)
