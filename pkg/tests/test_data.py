import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from hardkit.data import (Dataset, DatasetError, apply_normalizer, distance_matrix, fit_normalizer, load_dataset,
                          normalize, save_dataset, stratified_folds)


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


# -- Dataset -----------------------------------------------------------------

def test_dataset_rejects_bad_shapes_and_values():
    with pytest.raises(DatasetError):
        Dataset(np.zeros((1, 2)), np.array([0]))
    with pytest.raises(DatasetError):
        Dataset(np.zeros((3, 0)), np.array([0, 1, 0]))
    with pytest.raises(DatasetError, match="row 1, column 0"):
        Dataset(np.array([[0.0], [np.nan]]), np.array([0, 1]))
    with pytest.raises(DatasetError):
        Dataset(np.zeros((2, 1)), np.array([0, 2]))


def test_dataset_is_read_only():
    d = Dataset(np.zeros((3, 2)), np.array([0, 1, 0]))
    with pytest.raises(ValueError):
        d.X[0, 0] = 1.0
    assert d.feature_names == ("f0", "f1")


def test_single_class_allowed_until_an_operation_needs_both():
    d = Dataset(np.zeros((3, 1)), np.zeros(3, dtype=int))
    with pytest.raises(DatasetError, match="both classes"):
        d.require_both_classes("test")


# -- load_dataset ------------------------------------------------------------

def test_minority_label_maps_to_one(tmp_path):
    p = write(tmp_path, "a.csv", "x,y,label\n1,2,no\n3,4,yes\n5,6,no\n")
    d = load_dataset(p)
    assert d.y.sum() == 1 and d.y[1] == 1
    assert d.feature_names == ("x", "y")


def test_positive_label_override_and_named_column(tmp_path):
    p = write(tmp_path, "a.csv", "bug,x\nyes,1\nno,2\nno,3\n")
    d = load_dataset(p, label_column="bug", positive_label="no")
    assert d.y.tolist() == [0, 1, 1]


def test_non_numeric_cell_names_row_and_column(tmp_path):
    p = write(tmp_path, "a.csv", "x,y,label\n1,2,a\n3,oops,b\n")
    with pytest.raises(DatasetError, match=r"row 1, column 'y'.*'oops'"):
        load_dataset(p)


def test_load_errors(tmp_path):
    with pytest.raises(DatasetError):
        load_dataset(tmp_path / "missing.csv")
    with pytest.raises(DatasetError):
        load_dataset(write(tmp_path, "e.csv", "x,label\n"))
    with pytest.raises(DatasetError):
        load_dataset(write(tmp_path, "t.csv", "x,label\n1,a\n2,b\n3,c\n"))
    with pytest.raises(DatasetError):
        load_dataset(write(tmp_path, "m.csv", "x,label\n1,a\n,b\n"))


def test_promise_style_file_has_twenty_metrics(tmp_path):
    rng = np.random.default_rng(0)
    header = ",".join([f"m{i}" for i in range(20)] + ["bug"])
    rows = [",".join(f"{v:.3f}" for v in rng.random(20)) + f",{int(i % 5 == 0)}" for i in range(30)]
    d = load_dataset(write(tmp_path, "ant.csv", header + "\n" + "\n".join(rows) + "\n"))
    assert d.m == 20 and d.n == 30


def test_arff_lite(tmp_path):
    text = ("@relation demo\n@attribute a numeric\n@attribute b numeric\n@attribute bug {0,1}\n"
            "@data\n1,2,0\n3,4,1\n5,6,0\n")
    d = load_dataset(write(tmp_path, "d.arff", text))
    assert d.m == 2 and d.y.tolist() == [0, 1, 0]


def test_save_roundtrip(tmp_path):
    d = Dataset(np.array([[0.1, 2.0], [3.0, 4.5], [1e-12, -7.0]]), np.array([0, 1, 0]), ("a", "b"))
    save_dataset(d, tmp_path / "o.csv")
    back = load_dataset(tmp_path / "o.csv", label_column="label", positive_label="1")
    assert np.array_equal(back.X, d.X) and np.array_equal(back.y, d.y)


# -- normalization -----------------------------------------------------------

def test_standard_example():
    d = Dataset(np.array([[1.0], [2.0], [3.0]]), np.array([0, 1, 0]))
    np.testing.assert_allclose(normalize(d).X[:, 0], [-1.224744871391589, 0, 1.224744871391589], atol=1e-12)


def test_minmax_and_none_examples():
    d = Dataset(np.array([[2.0, 5.0], [4.0, 5.0], [6.0, 5.0]]), np.array([0, 1, 0]))
    np.testing.assert_allclose(normalize(d, "minmax").X[:, 0], [0, 0.5, 1])
    assert np.all(normalize(d, "minmax").X[:, 1] == 0)  # constant -> 0
    assert np.array_equal(normalize(d, "none").X, d.X)
    with pytest.raises(ValueError):
        fit_normalizer(d, "robust")


def test_normalizer_fitted_on_train_only():
    train = Dataset(np.array([[0.0], [2.0]]), np.array([0, 1]))
    test = Dataset(np.array([[4.0], [6.0]]), np.array([0, 1]))
    out = apply_normalizer(fit_normalizer(train), test)
    assert out.X[:, 0].tolist() == [3.0, 5.0]


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 40), st.integers(1, 5), st.integers(0, 10_000))
def test_standard_invariants_and_roundtrip(n, m, seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(0, rng.uniform(0.1, 100), (n, m)) + rng.uniform(-50, 50, m)
    d = Dataset(X, np.arange(n) % 2)
    spec = fit_normalizer(d, "standard")
    Z = spec.transform(X)
    assert np.all(np.abs(Z.mean(axis=0)) < 1e-9)
    ok = X.std(axis=0) > 0
    assert np.all(np.abs(Z[:, ok].var(axis=0) - 1) < 1e-6)
    np.testing.assert_allclose(spec.inverse_transform(Z)[:, ok], X[:, ok], atol=1e-9, rtol=0)
    mm = fit_normalizer(d, "minmax").transform(X)
    assert mm.min() >= 0 and mm.max() <= 1


# -- folds -------------------------------------------------------------------

def test_ten_instances_five_folds():
    d = Dataset(np.arange(10.0)[:, None], np.array([0, 1] * 5))
    plan = stratified_folds(d, seed=1, repeats=2, folds=5)
    for parts in plan.partitions:
        for test in parts:
            assert sorted(d.y[test].tolist()) == [0, 1]


def test_proportional_share_example():
    y = np.r_[np.ones(13), np.zeros(90)].astype(int)
    d = Dataset(np.random.default_rng(0).normal(size=(103, 2)), y)
    plan = stratified_folds(d)
    for parts in plan.partitions:
        assert all(int(d.y[t].sum()) in (2, 3) for t in parts)


def test_same_seed_same_partitions():
    d = Dataset(np.random.default_rng(0).normal(size=(30, 2)), np.arange(30) % 3 == 0)
    a, b = stratified_folds(d, 7), stratified_folds(d, 7)
    assert all(np.array_equal(x, z) for pa, pb in zip(a.partitions, b.partitions) for x, z in zip(pa, pb))
    c = stratified_folds(d, 8)
    assert any(not np.array_equal(x, z) for pa, pc in zip(a.partitions, c.partitions) for x, z in zip(pa, pc))


def test_class_too_small():
    d = Dataset(np.arange(10.0)[:, None], np.array([1, 1, 1] + [0] * 7))
    with pytest.raises(DatasetError, match="fewer than folds"):
        stratified_folds(d, folds=5)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=10, max_size=80), st.integers(0, 2**32 - 1),
       st.integers(2, 5), st.integers(1, 3))
def test_fold_cover_disjoint_stratified(labels, seed, folds, repeats):
    y = np.array(labels)
    if min(np.sum(y == 0), np.sum(y == 1)) < folds:
        return
    d = Dataset(np.random.default_rng(seed % 1000).normal(size=(len(y), 2)), y)
    plan = stratified_folds(d, seed, repeats, folds)
    for parts in plan.partitions:
        allidx = np.concatenate(parts)
        assert sorted(allidx.tolist()) == list(range(len(y)))
        for t in parts:
            for c in (0, 1):
                share = np.sum(y == c) / folds
                assert abs(np.sum(y[t] == c) - share) <= 1


def test_permuting_rows_moves_folds_with_them():
    rng = np.random.default_rng(3)
    d = Dataset(rng.normal(size=(40, 3)), (rng.random(40) < 0.4).astype(int))
    perm = rng.permutation(40)
    a = stratified_folds(d, 42)
    b = stratified_folds(d.subset(perm), 42)
    for pa, pb in zip(a.partitions, b.partitions):
        for ta, tb in zip(pa, pb):
            assert sorted(perm[tb].tolist()) == ta.tolist()


# -- distances ---------------------------------------------------------------

def test_three_four_five():
    D = distance_matrix(Dataset(np.array([[0.0, 0.0], [3.0, 4.0]]), np.array([0, 1])))
    assert D[0, 1] == 5.0 and D[1, 0] == 5.0 and D[0, 0] == 0.0


def test_duplicates_allowed():
    D = distance_matrix(np.array([[1.0, 1.0], [1.0, 1.0], [2.0, 2.0]]))
    assert D[0, 1] == 0.0


def test_distance_matches_bruteforce():
    X = np.random.default_rng(5).normal(size=(20, 5))
    np.testing.assert_allclose(distance_matrix(X), oracles.distances(X.tolist()), atol=1e-12, rtol=0)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_distance_metric_properties(seed):
    rng = np.random.default_rng(seed)
    D = distance_matrix(rng.normal(size=(12, 3)))
    assert np.array_equal(D, D.T) and np.all(np.diag(D) == 0) and np.all(D >= 0)
    for _ in range(20):
        i, j, k = rng.integers(0, 12, 3)
        assert D[i, k] <= D[i, j] + D[j, k] + 1e-9
