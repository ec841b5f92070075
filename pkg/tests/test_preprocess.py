"""Cleanup stages against hand-worked expectations."""

import numpy as np
import pytest

from bioselect.dataset import Dataset
from bioselect.preprocess import (
    PreprocessConfig,
    PreprocessPipeline,
    apply_bounds,
    drop_duplicates,
    iqr_bounds,
    knn_impute,
    minmax_apply,
    minmax_fit,
    smote_enn,
    zeros_to_missing,
)


def _ds(X, y, names=None):
    X = np.asarray(X, dtype=np.float64)
    names = names or tuple(f"c{i}" for i in range(X.shape[1]))
    return Dataset(X=X, y=np.asarray(y, dtype=np.int8), feature_names=names)


class TestZerosToMissing:
    def test_marks_named_columns_only(self):
        d = _ds([[0.0, 0.0], [1.0, 0.0]], [0, 1], ("a", "b"))
        out, n = zeros_to_missing(d, ["a"])
        assert n == 1
        assert np.isnan(out.X[0, 0]) and out.X[1, 1] == 0.0

    def test_unknown_column_rejected(self):
        d = _ds([[1.0]], [0], ("a",))
        with pytest.raises(ValueError, match="unknown columns"):
            zeros_to_missing(d, ["nope"])

    def test_empty_list_is_noop(self):
        d = _ds([[0.0]], [1], ("a",))
        out, n = zeros_to_missing(d, [])
        assert n == 0 and out is d


class TestDropDuplicates:
    def test_keeps_first_occurrence(self):
        d = _ds([[1, 2], [3, 4], [1, 2], [1, 2]], [0, 1, 0, 0]).with_ids()
        out, removed = drop_duplicates(d)
        assert removed == 2
        assert out.row_ids.tolist() == [0, 1]

    def test_same_features_different_label_both_kept(self):
        d = _ds([[1, 2], [1, 2]], [0, 1])
        out, removed = drop_duplicates(d)
        assert removed == 0 and out.n_rows == 2

    def test_negative_zero_equals_zero(self):
        d = _ds([[0.0], [-0.0]], [1, 1])
        out, removed = drop_duplicates(d)
        assert removed == 1

    def test_missing_cells_compare_equal(self):
        d = _ds([[np.nan, 1.0], [np.nan, 1.0]], [0, 0])
        out, removed = drop_duplicates(d)
        assert removed == 1


class TestIqr:
    def test_bounds_on_one_through_eight(self):
        # quartiles by linear interpolation: Q1=2.75, Q3=6.25, IQR=3.5
        d = _ds(np.arange(1.0, 9.0).reshape(-1, 1), [0, 1] * 4)
        b = iqr_bounds(d, 1.5)
        assert b.lo[0] == pytest.approx(-2.5)
        assert b.hi[0] == pytest.approx(11.5)

    def test_only_strictly_outside_values_marked(self):
        d = _ds(np.arange(1.0, 9.0).reshape(-1, 1), [0, 1] * 4)
        b = iqr_bounds(d, 1.5)
        probe = _ds([[-2.5], [11.5], [-2.51], [11.51]], [0, 1, 0, 1])
        out, n = apply_bounds(probe, b)
        assert n == 2
        assert not np.isnan(out.X[0, 0]) and not np.isnan(out.X[1, 0])
        assert np.isnan(out.X[2, 0]) and np.isnan(out.X[3, 0])

    def test_constant_column_marks_nothing(self):
        d = _ds([[5.0], [5.0], [5.0], [5.0]], [0, 1, 0, 1])
        out, n = apply_bounds(d, iqr_bounds(d, 1.5))
        assert n == 0

    def test_missing_values_ignored_for_quartiles(self):
        vals = [1.0, 2, 3, 4, 5, 6, 7, 8]
        X = np.array(vals + [np.nan]).reshape(-1, 1)
        d = _ds(X, [0, 1] * 4 + [0])
        b = iqr_bounds(d, 1.5)
        assert b.lo[0] == pytest.approx(-2.5) and b.hi[0] == pytest.approx(11.5)

    def test_all_missing_column_gets_nan_bounds(self):
        d = _ds([[np.nan], [np.nan]], [0, 1])
        b = iqr_bounds(d, 1.5)
        assert np.isnan(b.lo[0])
        out, n = apply_bounds(d, b)
        assert n == 0


class TestKnnImpute:
    def test_hand_worked_two_donor_mean(self):
        X = [[10.0, 0.0], [20.0, 1.0], [40.0, 5.0], [np.nan, 1.2]]
        d = _ds(X, [0, 1, 0, 1])
        out, n = knn_impute(d, k=2)
        # shared-feature distances from row 3: 1.44, 0.04, 14.44
        assert n == 1
        assert out.X[3, 0] == pytest.approx((20.0 + 10.0) / 2)

    def test_distance_ties_resolve_by_row_index(self):
        X = [[10.0, 0.0], [20.0, 0.0], [40.0, 0.0], [np.nan, 0.0]]
        d = _ds(X, [0, 1, 0, 1])
        out, _ = knn_impute(d, k=2)
        assert out.X[3, 0] == pytest.approx(15.0)

    def test_donor_must_hold_the_target_column(self):
        X = [[np.nan, 0.0], [5.0, 0.1], [np.nan, 0.2], [7.0, 4.0]]
        d = _ds(X, [0, 1, 0, 1])
        out, n = knn_impute(d, k=1)
        assert n == 2
        assert out.X[0, 0] == 5.0 and out.X[2, 0] == 5.0

    def test_imputation_uses_original_not_already_imputed_values(self):
        # row 0 must not see row 2's imputed value as a donor
        X = [[np.nan, 0.0], [5.0, 0.1], [np.nan, 0.05], [100.0, 9.0]]
        d = _ds(X, [0, 1, 0, 1])
        out, _ = knn_impute(d, k=1)
        assert out.X[0, 0] == 5.0 and out.X[2, 0] == 5.0

    def test_reference_pool_serves_as_donors(self):
        pool = _ds([[1.0, 1.0], [3.0, 1.0], [9.0, 9.0]], [0, 1, 0])
        probe = _ds([[np.nan, 1.0]], [1])
        out, n = knn_impute(probe, k=2, reference=pool)
        assert n == 1
        assert out.X[0, 0] == pytest.approx(2.0)

    def test_row_sharing_no_features_falls_back_to_column_mean(self):
        d = _ds([[np.nan, np.nan], [1.0, 2.0], [3.0, 1.0]], [0, 1, 1])
        out, n = knn_impute(d, k=1)
        assert n == 2
        assert out.X[0, 0] == pytest.approx(2.0)
        assert out.X[0, 1] == pytest.approx(1.5)

    def test_column_with_no_values_rejected(self):
        d = _ds([[np.nan, 1.0], [np.nan, 2.0]], [0, 1])
        with pytest.raises(ValueError, match="no values"):
            knn_impute(d, k=1)

    def test_complete_data_passes_through(self):
        d = _ds([[1.0, 2.0]], [0])
        out, n = knn_impute(d, k=3)
        assert n == 0 and out is d


class TestSmoteEnn:
    def _clusters(self):
        rng = np.random.default_rng(5)
        maj = rng.normal(0.0, 0.1, size=(9, 2))
        mino = rng.normal(10.0, 0.1, size=(5, 2))
        X = np.vstack([maj, mino])
        y = np.array([0] * 9 + [1] * 5, dtype=np.int8)
        return Dataset(X=X, y=y, feature_names=("a", "b")).with_ids()

    def test_counts_equalize_and_synthetics_get_sentinel_ids(self):
        out, info = smote_enn(self._clusters(), seed=3)
        assert info.synthesized == 4
        assert info.removed == 0
        assert out.class_counts() == {0: 9, 1: 9}
        assert (out.row_ids == -1).sum() == 4

    def test_synthetic_rows_stay_inside_minority_box(self):
        d = self._clusters()
        out, _ = smote_enn(d, seed=3)
        synth = out.X[out.row_ids == -1]
        lo = d.X[9:].min(axis=0) - 1e-12
        hi = d.X[9:].max(axis=0) + 1e-12
        assert (synth >= lo).all() and (synth <= hi).all()

    def test_noisy_row_inside_other_cluster_is_removed(self):
        d = self._clusters()
        X = np.vstack([d.X, [[0.05, 0.0]]])  # label-1 row inside the 0 cluster
        y = np.concatenate([d.y, [1]]).astype(np.int8)
        noisy = Dataset(X=X, y=y, feature_names=d.feature_names).with_ids()
        out, info = smote_enn(noisy, seed=3)
        assert info.removed >= 1
        assert not ((np.abs(out.X[:, 0] - 0.05) < 1e-9) & (out.y == 1)).any()

    def test_strict_majority_keeps_even_disagreement(self):
        X = [[0.0, 0], [0.1, 0], [0.2, 0], [0.3, 0], [10.0, 10], [10.1, 10]]
        y = [0, 0, 1, 0, 1, 1]
        out, info = smote_enn(_ds(X, y), enn_neighbors=2, seed=0)
        # only the planted row at 0.2 has both neighbors disagreeing
        assert info.synthesized == 0
        assert info.removed == 1
        assert not ((out.X[:, 0] == 0.2) & (out.y == 1)).any()
        assert out.n_rows == 5

    def test_single_class_rejected(self):
        with pytest.raises(ValueError, match="both classes"):
            smote_enn(_ds([[1.0], [2.0]], [1, 1]))

    def test_minority_of_one_rejected(self):
        X = [[0.0], [1.0], [2.0], [10.0]]
        with pytest.raises(ValueError, match="minority"):
            smote_enn(_ds(X, [0, 0, 0, 1]))

    def test_missing_values_rejected(self):
        with pytest.raises(ValueError, match="missing"):
            smote_enn(_ds([[np.nan], [1.0]], [0, 1]))

    def test_seeded_determinism(self):
        d = self._clusters()
        a, _ = smote_enn(d, seed=11)
        b, _ = smote_enn(d, seed=11)
        c, _ = smote_enn(d, seed=12)
        assert a.X.tobytes() == b.X.tobytes()
        assert a.X.tobytes() != c.X.tobytes()


class TestMinMax:
    def test_scales_fit_data_to_unit_range(self):
        d = _ds([[2.0, -1.0], [4.0, 3.0], [3.0, 1.0]], [0, 1, 0])
        s = minmax_fit(d)
        out = minmax_apply(d, s)
        assert out.X.min() == 0.0 and out.X.max() == 1.0
        assert out.X[2, 0] == pytest.approx(0.5)

    def test_constant_feature_maps_to_zero(self):
        d = _ds([[7.0, 1.0], [7.0, 2.0]], [0, 1])
        out = minmax_apply(d, minmax_fit(d))
        assert (out.X[:, 0] == 0.0).all()

    def test_out_of_range_values_not_clamped(self):
        train = _ds([[0.0], [10.0]], [0, 1])
        s = minmax_fit(train)
        probe = minmax_apply(_ds([[15.0], [-5.0]], [0, 1]), s)
        assert probe.X[0, 0] == pytest.approx(1.5)
        assert probe.X[1, 0] == pytest.approx(-0.5)

    def test_missing_values_rejected_at_fit(self):
        with pytest.raises(ValueError, match="missing"):
            minmax_fit(_ds([[np.nan]], [0]))


class TestPipeline:
    def _raw(self):
        rng = np.random.default_rng(4)
        X = rng.normal(5.0, 2.0, size=(80, 4))
        y = (rng.random(80) < 0.35).astype(np.int8)
        X[4] = X[9]
        y[4] = y[9]
        X[6, 1] = 500.0
        X[8, 2] = np.nan
        return Dataset(X=X, y=y, feature_names=("a", "b", "c", "d")).with_ids()

    def test_fit_transform_runs_all_stages(self):
        pipe = PreprocessPipeline(PreprocessConfig(seed=2))
        out = pipe.fit_transform(self._raw())
        r = pipe.report_
        assert r["duplicates_removed"] == 1
        assert r["outlier_cells"] >= 1
        assert r["cells_imputed"] >= r["outlier_cells"]
        assert not np.isnan(out.X).any()
        assert out.X.min() >= 0.0 and out.X.max() <= 1.0
        counts = out.class_counts()
        assert r["rows_out"] == out.n_rows
        assert abs(counts[0] - counts[1]) <= r["rows_removed_enn"]

    def test_transform_never_balances_or_drops_rows(self):
        pipe = PreprocessPipeline(PreprocessConfig(seed=2))
        pipe.fit_transform(self._raw())
        rng = np.random.default_rng(9)
        probe = Dataset(
            X=rng.normal(5.0, 2.0, size=(15, 4)),
            y=(rng.random(15) < 0.5).astype(np.int8),
            feature_names=("a", "b", "c", "d"),
        )
        out = pipe.transform(probe)
        assert out.n_rows == 15
        assert not np.isnan(out.X).any()

    def test_transform_marks_outliers_with_training_bounds(self):
        train = _ds(np.arange(1.0, 9.0).reshape(-1, 1), [0, 1] * 4)
        pipe = PreprocessPipeline(
            PreprocessConfig(balance=False, normalize=False, seed=0)
        )
        pipe.fit_transform(train)
        probe = pipe.transform(_ds([[100.0]], [0]))
        # 100 is far outside the training whiskers, so it must be replaced
        # by a value derived from the training pool (here the column mean,
        # since marking left the row with no observed feature)
        assert probe.X[0, 0] == pytest.approx(4.5)

    def test_transform_before_fit_rejected(self):
        pipe = PreprocessPipeline(PreprocessConfig())
        with pytest.raises(ValueError, match="before fit"):
            pipe.transform(_ds([[1.0]], [0]))

    def test_stage_toggles_disable_stages(self):
        d = self._raw()
        pipe = PreprocessPipeline(
            PreprocessConfig(
                drop_duplicates=False,
                mark_outliers=False,
                balance=False,
                normalize=False,
                seed=0,
            )
        )
        out = pipe.fit_transform(d)
        assert out.n_rows == d.n_rows
        assert pipe.report_["duplicates_removed"] == 0
        assert pipe.report_["outlier_cells"] == 0
        assert not np.isnan(out.X).any()  # imputation still on

    def test_pipeline_seed_pins_balancing(self):
        a = PreprocessPipeline(PreprocessConfig(seed=5)).fit_transform(self._raw())
        b = PreprocessPipeline(PreprocessConfig(seed=5)).fit_transform(self._raw())
        assert a.X.tobytes() == b.X.tobytes()
