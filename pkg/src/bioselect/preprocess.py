"""Tabular cleanup pipeline: duplicates, outliers, imputation, balancing, scaling.

Stages run in a fixed order (duplicates, IQR outlier marking, KNN imputation,
SMOTE+ENN balancing, min-max normalization). Outliers are never silently
clamped: values outside the whisker bounds become missing and are later
imputed, so every imputed cell is traceable. The pipeline object separates
``fit_transform`` (learn bounds, neighbor pool, and scaler from training
data) from ``transform`` (apply them to held-out data without balancing),
which keeps test rows out of every learned statistic.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .dataset import Dataset, seeded_rng


@dataclass(frozen=True)
class IqrBounds:
    """Per-feature keep range [lo, hi]; NaN bounds mean the column had no data."""

    lo: np.ndarray
    hi: np.ndarray


@dataclass(frozen=True)
class MinMaxScaler:
    mins: np.ndarray
    ranges: np.ndarray


@dataclass(frozen=True)
class BalanceSummary:
    synthesized: int
    removed: int


@dataclass(frozen=True)
class PreprocessConfig:
    """Stage toggles and knobs for the cleanup pipeline.

    ``zero_as_missing`` names feature columns where a literal zero encodes
    an absent measurement; those cells are converted to missing before any
    other stage runs.
    """

    drop_duplicates: bool = True
    mark_outliers: bool = True
    iqr_k: float = 1.5
    impute: bool = True
    impute_k: int = 5
    balance: bool = True
    smote_neighbors: int = 5
    enn_neighbors: int = 3
    normalize: bool = True
    zero_as_missing: tuple[str, ...] = ()
    seed: int = 0


def zeros_to_missing(d: Dataset, columns: Sequence[str]) -> tuple[Dataset, int]:
    """Replace exact zeros with missing in the named feature columns."""
    if not columns:
        return d, 0
    unknown = [c for c in columns if c not in d.feature_names]
    if unknown:
        raise ValueError(f"zero_as_missing names unknown columns: {unknown}")
    X = d.X.copy()
    count = 0
    for name in columns:
        j = d.feature_names.index(name)
        hit = X[:, j] == 0.0
        count += int(hit.sum())
        X[hit, j] = np.nan
    return replace(d, X=X), count


def drop_duplicates(d: Dataset) -> tuple[Dataset, int]:
    """Remove repeated (features, label) rows, keeping the first occurrence."""
    seen: set[bytes] = set()
    keep: list[int] = []
    for i in range(d.n_rows):
        row = d.X[i]
        # +0.0 folds -0.0 into 0.0; where() canonicalizes NaN payloads
        canon = np.where(np.isnan(row), np.nan, row + 0.0)
        key = canon.tobytes() + bytes([d.y[i]])
        if key not in seen:
            seen.add(key)
            keep.append(i)
    removed = d.n_rows - len(keep)
    if removed == 0:
        return d, 0
    return d.take(np.array(keep, dtype=np.intp)), removed


def iqr_bounds(d: Dataset, k: float = 1.5) -> IqrBounds:
    """Tukey whisker bounds per feature, quartiles by linear interpolation."""
    lo = np.full(d.n_features, np.nan)
    hi = np.full(d.n_features, np.nan)
    for j in range(d.n_features):
        vals = d.X[:, j]
        vals = vals[~np.isnan(vals)]
        if vals.size == 0:
            continue
        q1, q3 = np.quantile(vals, [0.25, 0.75])
        iqr = q3 - q1
        lo[j] = q1 - k * iqr
        hi[j] = q3 + k * iqr
    return IqrBounds(lo=lo, hi=hi)


def apply_bounds(d: Dataset, bounds: IqrBounds) -> tuple[Dataset, int]:
    """Mark values strictly outside [lo, hi] as missing; returns marked count."""
    X = d.X.copy()
    count = 0
    for j in range(d.n_features):
        lo, hi = bounds.lo[j], bounds.hi[j]
        if np.isnan(lo):
            continue
        col = X[:, j]
        out = (~np.isnan(col)) & ((col < lo) | (col > hi))
        count += int(out.sum())
        col[out] = np.nan
    if count == 0:
        return d, 0
    return replace(d, X=X), count


def _masked_sq_dist(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Mean squared difference over features present in both rows.

    Rows with no feature in common are infinitely far apart.
    """
    a_ok = ~np.isnan(A)
    b_ok = ~np.isnan(B)
    A0 = np.where(a_ok, A, 0.0)
    B0 = np.where(b_ok, B, 0.0)
    shared = a_ok.astype(np.float64) @ b_ok.astype(np.float64).T
    d2 = (A0**2) @ b_ok.T.astype(np.float64)
    d2 += a_ok.astype(np.float64) @ (B0**2).T
    d2 -= 2.0 * (A0 @ B0.T)
    np.clip(d2, 0.0, None, out=d2)
    with np.errstate(invalid="ignore", divide="ignore"):
        d2 = np.where(shared > 0, d2 / shared, np.inf)
    return d2


def knn_impute(
    d: Dataset, k: int = 5, reference: Dataset | None = None
) -> tuple[Dataset, int]:
    """Fill missing cells with the mean of the k nearest donors.

    Distances are mean squared differences over the features two rows share.
    Donor candidates must hold a value in the target column; all distances
    and donor values come from the matrices as passed in, never from cells
    imputed earlier in the same call. When ``reference`` is given its rows
    form the donor pool (the row itself is excluded only in the self-pool
    case). Distance ties resolve toward the lower donor index. A row that
    shares no feature with any donor falls back to the pool's column mean;
    a column with no values anywhere in the pool is an error.
    """
    missing = np.isnan(d.X)
    if not missing.any():
        return d, 0
    pool = d if reference is None else reference
    fully_missing = np.isnan(pool.X).all(axis=0)
    if fully_missing.any():
        names = [d.feature_names[j] for j in np.flatnonzero(fully_missing)]
        raise ValueError(f"cannot impute: donor pool has no values in {names}")
    rows_to_fix = np.flatnonzero(missing.any(axis=1))
    d2 = _masked_sq_dist(d.X[rows_to_fix], pool.X)
    X = d.X.copy()
    count = 0
    for ri, r in enumerate(rows_to_fix):
        dist = d2[ri].copy()
        if reference is None:
            dist[r] = np.inf
        order = np.argsort(dist, kind="stable")
        for j in np.flatnonzero(missing[r]):
            donors = order[~np.isnan(pool.X[order, j]) & np.isfinite(dist[order])]
            if donors.size == 0:
                col = pool.X[:, j]
                X[r, j] = float(col[~np.isnan(col)].mean())
            else:
                chosen = donors[: min(k, donors.size)]
                X[r, j] = float(pool.X[chosen, j].mean())
            count += 1
    return replace(d, X=X), count


def _pairwise_sq_dist(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    d2 = (A**2).sum(axis=1)[:, None] + (B**2).sum(axis=1)[None, :] - 2.0 * (A @ B.T)
    np.clip(d2, 0.0, None, out=d2)
    return d2


def smote_enn(
    d: Dataset,
    smote_neighbors: int = 5,
    enn_neighbors: int = 3,
    seed: int = 0,
) -> tuple[Dataset, BalanceSummary]:
    """Equalize class counts by interpolation, then prune noisy rows.

    Synthesis draws, per new row: a minority row, one of its nearest
    minority neighbors, and a coefficient u in [0, 1); the sample is
    row + u * (neighbor - row). Afterwards every row whose nearest
    neighbors disagree with its label by strict majority is removed, with
    all removal decisions taken against the pre-removal set.
    """
    if np.isnan(d.X).any():
        raise ValueError("balancing requires a dataset with no missing values")
    counts = d.class_counts()
    if len(counts) < 2:
        raise ValueError("balancing requires both classes to be present")
    minority = min(counts, key=lambda c: (counts[c], c))
    majority = 1 - minority
    need = counts[majority] - counts[minority]
    rng = seeded_rng(seed, 23)

    X, y = d.X, d.y
    ids = d.row_ids
    synthesized = 0
    if need > 0:
        min_idx = np.flatnonzero(y == minority)
        if min_idx.size < 2:
            raise ValueError(
                "balancing requires at least 2 rows of the minority class"
            )
        Xm = X[min_idx]
        d2 = _pairwise_sq_dist(Xm, Xm)
        np.fill_diagonal(d2, np.inf)
        k_eff = min(smote_neighbors, min_idx.size - 1)
        nn = np.argsort(d2, axis=1, kind="stable")[:, :k_eff]
        new_rows = np.empty((need, X.shape[1]))
        for s in range(need):
            r = int(rng.integers(min_idx.size))
            nb = int(nn[r, int(rng.integers(k_eff))])
            u = float(rng.random())
            new_rows[s] = Xm[r] + u * (Xm[nb] - Xm[r])
        X = np.vstack([X, new_rows])
        y = np.concatenate([y, np.full(need, minority, dtype=np.int8)])
        if ids is not None:
            ids = np.concatenate([ids, np.full(need, -1, dtype=np.int64)])
        synthesized = need

    n = X.shape[0]
    k_enn = min(enn_neighbors, n - 1)
    removed = 0
    if k_enn > 0:
        d2 = _pairwise_sq_dist(X, X)
        np.fill_diagonal(d2, np.inf)
        nn = np.argsort(d2, axis=1, kind="stable")[:, :k_enn]
        disagree = (y[nn] != y[:, None]).sum(axis=1)
        drop = disagree * 2 > k_enn
        removed = int(drop.sum())
        if removed:
            keep = ~drop
            X, y = X[keep], y[keep]
            if ids is not None:
                ids = ids[keep]
    if X.shape[0] == 0:
        raise ValueError("balancing removed every row; relax enn_neighbors")
    out = Dataset(
        X=X, y=y, feature_names=d.feature_names, source=d.source, row_ids=ids
    )
    return out, BalanceSummary(synthesized=synthesized, removed=removed)


def minmax_fit(d: Dataset) -> MinMaxScaler:
    if np.isnan(d.X).any():
        raise ValueError("normalization requires a dataset with no missing values")
    mins = d.X.min(axis=0)
    ranges = d.X.max(axis=0) - mins
    return MinMaxScaler(mins=mins, ranges=ranges)


def minmax_apply(d: Dataset, scaler: MinMaxScaler) -> Dataset:
    """Scale features to [0, 1] by the fitted ranges.

    Constant features map to 0. Values outside the fitted range are not
    clamped, so held-out data can legitimately fall outside [0, 1].
    """
    if scaler.mins.shape[0] != d.n_features:
        raise ValueError("scaler was fitted on a different feature count")
    safe = np.where(scaler.ranges > 0, scaler.ranges, 1.0)
    X = (d.X - scaler.mins) / safe
    X[:, scaler.ranges == 0] = 0.0
    return replace(d, X=X)


class PreprocessPipeline:
    """Learn cleanup parameters on training data, replay them on held-out data.

    ``fit_transform`` runs the full stage list and records IQR bounds, the
    imputation donor pool (the training matrix after its own imputation,
    before balancing), and the min-max scaler. ``transform`` applies those
    recorded parameters and never balances, so evaluation rows are cleaned
    purely with training-derived statistics.
    """

    def __init__(self, config: PreprocessConfig | None = None):
        self.config = config or PreprocessConfig()
        self.bounds_: IqrBounds | None = None
        self.donor_pool_: Dataset | None = None
        self.scaler_: MinMaxScaler | None = None
        self.report_: dict[str, int] = {}

    def fit_transform(self, d: Dataset) -> Dataset:
        cfg = self.config
        report = {
            "rows_in": d.n_rows,
            "zeros_marked": 0,
            "duplicates_removed": 0,
            "outlier_cells": 0,
            "cells_imputed": 0,
            "rows_synthesized": 0,
            "rows_removed_enn": 0,
        }
        d, report["zeros_marked"] = zeros_to_missing(d, cfg.zero_as_missing)
        if cfg.drop_duplicates:
            d, report["duplicates_removed"] = drop_duplicates(d)
        if cfg.mark_outliers:
            self.bounds_ = iqr_bounds(d, cfg.iqr_k)
            d, report["outlier_cells"] = apply_bounds(d, self.bounds_)
        if cfg.impute:
            d, report["cells_imputed"] = knn_impute(d, cfg.impute_k)
        self.donor_pool_ = d
        if cfg.balance:
            d, bal = smote_enn(
                d,
                smote_neighbors=cfg.smote_neighbors,
                enn_neighbors=cfg.enn_neighbors,
                seed=cfg.seed,
            )
            report["rows_synthesized"] = bal.synthesized
            report["rows_removed_enn"] = bal.removed
        if cfg.normalize:
            self.scaler_ = minmax_fit(d)
            d = minmax_apply(d, self.scaler_)
        report["rows_out"] = d.n_rows
        self.report_ = report
        return d

    def transform(self, d: Dataset) -> Dataset:
        cfg = self.config
        d, _ = zeros_to_missing(d, cfg.zero_as_missing)
        if cfg.mark_outliers:
            if self.bounds_ is None:
                raise ValueError("transform called before fit_transform")
            d, _ = apply_bounds(d, self.bounds_)
        if cfg.impute:
            if self.donor_pool_ is None:
                raise ValueError("transform called before fit_transform")
            d, _ = knn_impute(d, cfg.impute_k, reference=self.donor_pool_)
        if cfg.normalize:
            if self.scaler_ is None:
                raise ValueError("transform called before fit_transform")
            d = minmax_apply(d, self.scaler_)
        return d
