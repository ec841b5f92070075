"""Loading, masks, projection, and splitting."""

import numpy as np
import pytest

from bioselect.dataset import (
    Dataset,
    FeatureMask,
    SplitSpec,
    load_csv,
    project,
    save_csv,
    split,
)


def _write(tmp_path, text, name="data.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestLoadCsv:
    def test_numeric_columns_parse_as_floats(self, tmp_path):
        p = _write(tmp_path, "a,b,diagnosis\n1.5,2,0\n-3.25,4e2,1\n")
        d = load_csv(p)
        assert d.feature_names == ("a", "b")
        assert d.X[0, 0] == 1.5 and d.X[1, 1] == 400.0
        assert d.y.tolist() == [0, 1]

    def test_categorical_codes_follow_sorted_token_order(self, tmp_path):
        p = _write(tmp_path, "color,diagnosis\nred,0\nblue,1\ngreen,0\nblue,1\n")
        d = load_csv(p)
        # sorted tokens: blue=0, green=1, red=2
        assert d.X[:, 0].tolist() == [2.0, 0.0, 1.0, 0.0]

    def test_categorical_codes_do_not_depend_on_row_order(self, tmp_path):
        p1 = _write(tmp_path, "c,diagnosis\nz,0\na,1\nm,0\n", "one.csv")
        p2 = _write(tmp_path, "c,diagnosis\na,1\nm,0\nz,0\n", "two.csv")
        d1, d2 = load_csv(p1), load_csv(p2)
        codes1 = dict(zip(["z", "a", "m"], d1.X[:, 0]))
        codes2 = dict(zip(["a", "m", "z"], d2.X[:, 0]))
        assert codes1 == codes2

    def test_missing_tokens_become_nan(self, tmp_path):
        p = _write(tmp_path, "a,b,diagnosis\n,5,0\n?,6,1\nNaN,7,0\n1,8,1\n")
        d = load_csv(p)
        assert np.isnan(d.X[:3, 0]).all()
        assert d.X[3, 0] == 1.0

    def test_mixed_column_falls_back_to_categorical(self, tmp_path):
        # "5" and "low" together force token treatment; sorted: "5" < "low"
        p = _write(tmp_path, "a,diagnosis\n5,0\nlow,1\n")
        d = load_csv(p)
        assert d.X[:, 0].tolist() == [0.0, 1.0]

    def test_label_must_be_binary(self, tmp_path):
        p = _write(tmp_path, "a,diagnosis\n1,0\n2,2\n")
        with pytest.raises(ValueError, match="binary"):
            load_csv(p)

    def test_label_may_be_categorical_if_it_codes_to_binary(self, tmp_path):
        p = _write(tmp_path, "a,diagnosis\n1,no\n2,yes\n3,no\n")
        d = load_csv(p)
        assert d.y.tolist() == [0, 1, 0]

    def test_label_missing_values_rejected(self, tmp_path):
        p = _write(tmp_path, "a,diagnosis\n1,0\n2,?\n")
        with pytest.raises(ValueError, match="missing"):
            load_csv(p)

    def test_unknown_label_column_rejected(self, tmp_path):
        p = _write(tmp_path, "a,b\n1,2\n")
        with pytest.raises(ValueError, match="label column"):
            load_csv(p)

    def test_ragged_rows_rejected(self, tmp_path):
        p = _write(tmp_path, "a,b,diagnosis\n1,2,0\n1,2\n")
        with pytest.raises(ValueError, match="row 3"):
            load_csv(p)

    def test_duplicate_header_rejected(self, tmp_path):
        p = _write(tmp_path, "a,a,diagnosis\n1,2,0\n")
        with pytest.raises(ValueError, match="duplicate"):
            load_csv(p)

    def test_empty_file_and_header_only_rejected(self, tmp_path):
        with pytest.raises(ValueError, match="empty"):
            load_csv(_write(tmp_path, "", "empty.csv"))
        with pytest.raises(ValueError, match="no data rows"):
            load_csv(_write(tmp_path, "a,diagnosis\n", "hdr.csv"))

    def test_cells_are_stripped(self, tmp_path):
        p = _write(tmp_path, "a,diagnosis\n 1.5 , 0\n2, 1 \n")
        d = load_csv(p)
        assert d.X[:, 0].tolist() == [1.5, 2.0]
        assert d.y.tolist() == [0, 1]


class TestRoundTrip:
    def test_save_load_preserves_finite_values_bit_exactly(self, tmp_path):
        rng = np.random.default_rng(3)
        X = rng.normal(size=(40, 5)) * 10.0 ** rng.integers(-12, 12, size=(40, 5))
        X[0, 0] = 0.1 + 0.2  # classic non-representable decimal
        y = (rng.random(40) < 0.5).astype(np.int8)
        y[:2] = [0, 1]
        d = Dataset(X=X, y=y, feature_names=tuple(f"c{i}" for i in range(5)))
        p = tmp_path / "rt.csv"
        save_csv(d, p)
        back = load_csv(p)
        assert back.X.tobytes() == d.X.tobytes()
        assert (back.y == d.y).all()
        assert back.feature_names == d.feature_names

    def test_missing_cells_survive_round_trip(self, tmp_path):
        X = np.array([[1.0, np.nan], [np.nan, 2.0], [0.5, 0.25]])
        d = Dataset(X=X, y=np.array([0, 1, 0], dtype=np.int8), feature_names=("a", "b"))
        p = tmp_path / "rt.csv"
        save_csv(d, p)
        back = load_csv(p)
        assert np.isnan(back.X[0, 1]) and np.isnan(back.X[1, 0])
        assert back.X[2, 0] == 0.5


class TestDataset:
    def test_rejects_non_binary_labels(self):
        with pytest.raises(ValueError, match="labels"):
            Dataset(
                X=np.zeros((2, 1)),
                y=np.array([0, 3], dtype=np.int8),
                feature_names=("a",),
            )

    def test_rejects_shape_mismatch(self):
        with pytest.raises(ValueError):
            Dataset(X=np.zeros((2, 2)), y=np.zeros(3, dtype=np.int8), feature_names=("a", "b"))
        with pytest.raises(ValueError, match="feature names"):
            Dataset(X=np.zeros((2, 2)), y=np.zeros(2, dtype=np.int8), feature_names=("a",))

    def test_arrays_are_read_only(self, toy_data):
        with pytest.raises(ValueError):
            toy_data.X[0, 0] = 99.0
        with pytest.raises(ValueError):
            toy_data.y[0] = 1

    def test_class_counts(self):
        d = Dataset(
            X=np.zeros((5, 1)),
            y=np.array([0, 1, 1, 0, 1], dtype=np.int8),
            feature_names=("a",),
        )
        assert d.class_counts() == {0: 2, 1: 3}

    def test_with_ids_and_take(self, toy_data):
        tagged = toy_data.with_ids()
        sub = tagged.take(np.array([5, 2, 9]))
        assert sub.row_ids.tolist() == [5, 2, 9]
        assert (sub.X == toy_data.X[[5, 2, 9]]).all()


class TestFeatureMask:
    def test_basic_properties(self):
        m = FeatureMask([1, 0, 1, 1, 0])
        assert m.n == 5 and m.popcount == 3
        assert m.indices().tolist() == [0, 2, 3]
        assert m.reduction() == pytest.approx(0.4)

    def test_equality_and_hash(self):
        a = FeatureMask([1, 0, 1])
        b = FeatureMask(np.array([1, 0, 1], dtype=np.uint8))
        c = FeatureMask([1, 1, 1])
        assert a == b and hash(a) == hash(b)
        assert a != c
        assert len({a, b, c}) == 2

    def test_rejects_non_binary(self):
        with pytest.raises(ValueError):
            FeatureMask([0, 2, 1])

    def test_ones(self):
        m = FeatureMask.ones(4)
        assert m.popcount == 4 and m.reduction() == 0.0


class TestProject:
    def test_selects_columns_and_names(self, toy_data):
        m = FeatureMask([1, 0, 0, 1, 0, 0, 0, 1])
        sub = project(toy_data, m)
        assert sub.feature_names == ("f0", "f3", "f7")
        assert (sub.X == toy_data.X[:, [0, 3, 7]]).all()
        assert (sub.y == toy_data.y).all()

    def test_rejects_empty_and_mismatched_masks(self, toy_data):
        with pytest.raises(ValueError, match="no features"):
            project(toy_data, FeatureMask([0] * 8))
        with pytest.raises(ValueError, match="length"):
            project(toy_data, FeatureMask([1, 0]))


class TestSplit:
    def test_train_size_is_rounded_fraction(self, toy_data):
        tr, te = split(toy_data, SplitSpec(fraction=0.7, seed=1))
        assert tr.n_rows == round(0.7 * 120) == 84
        assert te.n_rows == 36

    def test_rounding_on_awkward_sizes(self):
        d = Dataset(
            X=np.arange(97.0).reshape(-1, 1),
            y=np.array([0, 1] * 48 + [0], dtype=np.int8),
            feature_names=("a",),
        )
        tr, te = split(d, SplitSpec(fraction=0.7, seed=0))
        assert tr.n_rows == round(0.7 * 97) == 68

    def test_partition_is_disjoint_and_exhaustive(self, toy_data):
        tagged = toy_data.with_ids()
        tr, te = split(tagged, SplitSpec(fraction=0.7, seed=5))
        ids = sorted(tr.row_ids.tolist() + te.row_ids.tolist())
        assert ids == list(range(120))

    def test_stratified_class_balance_within_one_row(self):
        for seed in range(10):
            rng = np.random.default_rng(seed)
            n = int(rng.integers(30, 200))
            y = (rng.random(n) < 0.3).astype(np.int8)
            if y.sum() < 2 or (n - y.sum()) < 2:
                continue
            d = Dataset(X=rng.normal(size=(n, 3)), y=y, feature_names=("a", "b", "c"))
            frac = float(rng.uniform(0.5, 0.85))
            tr, _ = split(d, SplitSpec(fraction=frac, seed=seed))
            for c, count in d.class_counts().items():
                got = int((tr.y == c).sum())
                assert abs(got - frac * count) <= 1.0

    def test_same_seed_reproduces_split(self, toy_data):
        a = split(toy_data.with_ids(), SplitSpec(fraction=0.7, seed=9))
        b = split(toy_data.with_ids(), SplitSpec(fraction=0.7, seed=9))
        assert (a[0].row_ids == b[0].row_ids).all()

    def test_different_seeds_differ(self, toy_data):
        tagged = toy_data.with_ids()
        a, _ = split(tagged, SplitSpec(fraction=0.7, seed=1))
        b, _ = split(tagged, SplitSpec(fraction=0.7, seed=2))
        assert a.row_ids.tolist() != b.row_ids.tolist()

    def test_stratification_needs_two_rows_per_class(self):
        d = Dataset(
            X=np.arange(4.0).reshape(-1, 1),
            y=np.array([0, 0, 0, 1], dtype=np.int8),
            feature_names=("a",),
        )
        with pytest.raises(ValueError, match="stratification"):
            split(d, SplitSpec(fraction=0.5, seed=0))

    def test_empty_side_rejected(self):
        d = Dataset(
            X=np.arange(2.0).reshape(-1, 1),
            y=np.array([0, 1], dtype=np.int8),
            feature_names=("a",),
        )
        with pytest.raises(ValueError, match="empty"):
            split(d, SplitSpec(fraction=0.95, seed=0, stratified=False))

    def test_fraction_bounds_validated(self):
        with pytest.raises(ValueError):
            SplitSpec(fraction=0.0)
        with pytest.raises(ValueError):
            SplitSpec(fraction=1.0)
