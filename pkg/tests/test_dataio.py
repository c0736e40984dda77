from __future__ import annotations

import numpy as np
import pytest

from hmcbench import SplitPlan, from_arrays, load_csv, monte_carlo_splits, save_csv
from hmcbench.dataio import DataError, make_two_level_gaussians


def write(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_load_csv_basic(tmp_path):
    path = write(tmp_path, "a,b,y\n1,2,A\n3,4,B\n5,6,A\n")
    ds = load_csv(path, "y")
    assert ds.n_rows == 3 and ds.n_features == 2
    assert ds.class_names == ("A", "B")
    assert ds.labels.tolist() == [0, 1, 0]
    np.testing.assert_array_equal(ds.features, [[1, 2], [3, 4], [5, 6]])


def test_load_csv_label_by_index_no_header(tmp_path):
    path = write(tmp_path, "1,2,A\n3,4,B\n")
    ds = load_csv(path, 2, header=False)
    assert ds.class_names == ("A", "B")
    assert ds.n_features == 2


def test_load_csv_class_names_sorted(tmp_path):
    path = write(tmp_path, "x,y\n1,zebra\n2,apple\n3,zebra\n")
    ds = load_csv(path, "y")
    assert ds.class_names == ("apple", "zebra")
    assert ds.labels.tolist() == [1, 0, 1]


def test_load_csv_rejects_nan_with_location(tmp_path):
    path = write(tmp_path, "a,b,y\n1,2,A\n3,NaN,B\n")
    with pytest.raises(DataError, match=r"row 2.*'b'"):
        load_csv(path, "y")


def test_load_csv_rejects_unparseable_with_location(tmp_path):
    path = write(tmp_path, "a,b,y\n1,2,A\nx,4,B\n")
    with pytest.raises(DataError, match=r"row 2.*'a'"):
        load_csv(path, "y")


def test_load_csv_missing_file(tmp_path):
    with pytest.raises(DataError, match="no such file"):
        load_csv(tmp_path / "nope.csv", "y")


def test_load_csv_duplicate_columns(tmp_path):
    path = write(tmp_path, "a,a,y\n1,2,A\n")
    with pytest.raises(DataError, match="duplicate column"):
        load_csv(path, "y")


def test_load_csv_missing_label_column(tmp_path):
    path = write(tmp_path, "a,b,y\n1,2,A\n")
    with pytest.raises(DataError, match="label column"):
        load_csv(path, "z")


def test_from_arrays_rejects_nonfinite():
    with pytest.raises(DataError, match="non-finite"):
        from_arrays(np.array([[1.0], [np.inf]]), np.array([0, 1]), ["a", "b"])


def test_roundtrip_exact(tmp_path):
    rng = np.random.default_rng(3)
    ds = from_arrays(rng.normal(size=(40, 3)) * 1e3, rng.integers(0, 3, 40),
                     ["x", "y", "z"])
    save_csv(ds, tmp_path / "out.csv")
    back = load_csv(tmp_path / "out.csv", "label")
    np.testing.assert_array_equal(back.features, ds.features)
    assert back.labels.tolist() == ds.labels.tolist()
    assert back.class_names == ds.class_names


def test_splits_partition_and_stratification():
    rng = np.random.default_rng(0)
    labels = rng.permutation(np.repeat([0, 1, 2], [40, 25, 9]))
    ds = from_arrays(rng.normal(size=(74, 2)), labels, ["a", "b", "c"])
    plan = SplitPlan(seed=5, n_folds=8, train_fraction=0.9)
    for train, test in monte_carlo_splits(ds, plan):
        assert np.intersect1d(train, test).size == 0
        assert np.array_equal(np.union1d(train, test), np.arange(74))
        for c, count in enumerate([40, 25, 9]):
            test_count = int(np.sum(ds.labels[test] == c))
            assert abs(test_count - round(0.1 * count)) <= 1
            assert np.sum(ds.labels[train] == c) >= 1


def test_splits_deterministic():
    ds = make_two_level_gaussians(rows_per_class=10, seed=4)
    plan = SplitPlan(seed=99, n_folds=5, train_fraction=0.8)
    a = monte_carlo_splits(ds, plan)
    b = monte_carlo_splits(ds, plan)
    for (ta, sa), (tb, sb) in zip(a, b):
        assert ta.tobytes() == tb.tobytes()
        assert sa.tobytes() == sb.tobytes()


def test_splits_differ_across_folds():
    ds = make_two_level_gaussians(rows_per_class=10, seed=4)
    plan = SplitPlan(seed=99, n_folds=2, train_fraction=0.8)
    (t0, _), (t1, _) = monte_carlo_splits(ds, plan)
    assert t0.tolist() != t1.tolist()


def test_tiny_class_always_trains():
    # a 6-instance class must reach training in every fold
    rng = np.random.default_rng(1)
    labels = np.array([0] * 80 + [1] * 6)
    ds = from_arrays(rng.normal(size=(86, 2)), labels, ["big", "tiny"])
    plan = SplitPlan(seed=2, n_folds=20, train_fraction=0.9)
    for train, _ in monte_carlo_splits(ds, plan):
        assert np.sum(ds.labels[train] == 1) >= 1


def test_split_plan_validation():
    with pytest.raises(ValueError):
        SplitPlan(seed=1, n_folds=0, train_fraction=0.5)
    with pytest.raises(ValueError):
        SplitPlan(seed=1, n_folds=3, train_fraction=1.0)


def test_subset_tracks_provenance():
    ds = make_two_level_gaussians(rows_per_class=5, seed=0)
    sub = ds.subset([3, 7, 11])
    assert sub.source_rows.tolist() == [3, 7, 11]
    nested = sub.subset([2, 0])
    assert nested.source_rows.tolist() == [11, 3]
