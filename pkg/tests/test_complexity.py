import json
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import random_dataset
from hardkit.complexity import (MEASURES, ComplexityWarning, balance_dataset_measures, complexity_profile,
                                dimensionality_measures, epsilon_graph, f1_measure, feature_measures, fisher_ratio,
                                n2_measure, neighborhood_dataset_measures, network_measures, pca_dimension,
                                profiles_to_csv)
from hardkit.data import Dataset
from hardkit.preprocess import resample
from hardkit.synthetic import gaussian_blobs


def test_twenty_two_measures_in_six_families():
    assert len(MEASURES) == 22 and len(set(MEASURES)) == 22


# -- feature-based -----------------------------------------------------------

def test_fisher_ratio_edge_cases():
    X = np.array([[1.0, 0.0, 5.0], [1.0, 0.0, 5.0], [1.0, 1.0, 6.0], [1.0, 1.0, 7.0]])
    y = np.array([0, 0, 1, 1])
    r = fisher_ratio(X, y)
    assert r[0] == 0.0          # constant column
    assert math.isinf(r[1])     # perfectly separated, no within-class spread
    assert r[2] == pytest.approx(oracles.fisher_r(X[:, 2].tolist(), y.tolist()))


def test_f1_one_dimensional_example():
    d = Dataset(np.array([[0.0], [1.0], [10.0], [11.0]]), np.array([0, 0, 1, 1]))
    assert f1_measure(d) == pytest.approx(1 / 101)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10_000))
def test_f1_matches_oracle(seed):
    d = random_dataset(np.random.default_rng(seed), (12, 50), (1, 6), discrete=seed % 4 == 0)
    assert f1_measure(d) == pytest.approx(oracles.f1(d.X.tolist(), d.y.tolist()), abs=1e-12)


def test_overlap_measures_vanish_on_disjoint_ranges():
    d = gaussian_blobs(n=30, separation=10.0, seed=0)
    f = feature_measures(d)
    assert f["F2"] == 0.0 and f["F3"] == 0.0 and f["F4"] == 0.0


def test_identical_class_ranges_maximize_f2():
    X = np.array([[0.0], [1.0], [0.0], [1.0]])
    f = feature_measures(Dataset(X, np.array([0, 0, 1, 1])))
    assert f["F2"] == 1.0 and f["F3"] == 1.0 and f["F1"] == 1.0


# -- neighbourhood -----------------------------------------------------------

def test_separated_clusters():
    d = gaussian_blobs(n=40, separation=10.0, seed=5)
    nb = neighborhood_dataset_measures(d)
    assert nb["N1"] <= 2 / d.n and nb["N3"] == 0.0 and nb["N4"] == 0.0


def test_lsc_two_tight_clusters():
    # every local set is the instance's own cluster (self included)
    X = np.array([[0.0], [0.1], [10.0], [10.1]])
    nb = neighborhood_dataset_measures(Dataset(X, np.array([0, 0, 1, 1])))
    assert nb["LSC"] == 0.5


def test_n2_matches_oracle():
    rng = np.random.default_rng(2)
    for _ in range(20):
        d = random_dataset(rng, (12, 40), (1, 5))
        assert n2_measure(d) == pytest.approx(oracles.n2_dataset(d.X.tolist(), d.y.tolist()), abs=1e-12)


def test_t1_on_two_tight_clusters():
    X = np.array([[0.0], [0.1], [10.0], [10.1]])
    nb = neighborhood_dataset_measures(Dataset(X, np.array([0, 0, 1, 1])))
    assert 0 < nb["T1"] <= 1


# -- network -----------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_epsilon_graph_matches_oracle(seed):
    d = random_dataset(np.random.default_rng(seed), (12, 40), (1, 4))
    A = epsilon_graph(d)
    edges = sorted((int(i), int(j)) for i, j in zip(*np.nonzero(np.triu(A, 1))))
    assert edges == oracles.epsilon_graph_edges(d.X.tolist(), d.y.tolist())
    net = network_measures(d)
    n = d.n
    assert net["Density"] == pytest.approx(1 - len(edges) / (n * (n - 1) / 2), abs=1e-12)


def test_edgeless_graph():
    # points far apart relative to the diameter never fall inside the radius
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    net = network_measures(Dataset(X, np.array([0, 1, 0, 1])))
    assert net["Density"] == 1.0 and net["ClsCoef"] == 1.0 and net["Hubs"] == 1.0


def test_clustering_coefficient_of_complete_cliques():
    # two tight same-class triangles far apart: every neighbourhood is fully connected
    X = np.array([[0.0, 0.0], [0.01, 0.0], [0.0, 0.01], [10.0, 10.0], [10.01, 10.0], [10.0, 10.01]])
    net = network_measures(Dataset(X, np.array([0, 0, 0, 1, 1, 1])))
    assert net["ClsCoef"] == 0.0
    assert net["Density"] == pytest.approx(1 - 6 / 15)


# -- dimensionality ----------------------------------------------------------

def test_rank_three_data_in_five_columns():
    rng = np.random.default_rng(0)
    Z = rng.normal(size=(40, 3)) * np.array([1.0, 0.9, 0.8])
    Q, _ = np.linalg.qr(rng.normal(size=(5, 5)))
    X = Z @ Q[:3]
    d = Dataset(X, np.arange(40) % 2)
    dm = dimensionality_measures(d)
    assert pca_dimension(X) == 3
    assert dm["T2"] == 5 / 40 and dm["T3"] == 3 / 40 and dm["T4"] == 3 / 5


def test_duplicated_columns_give_one_component():
    col = np.random.default_rng(1).normal(size=(20, 1))
    d = Dataset(np.repeat(col, 4, axis=1), np.arange(20) % 2)
    assert dimensionality_measures(d)["T4"] == 0.25


def test_single_column():
    d = Dataset(np.random.default_rng(2).normal(size=(15, 1)), np.arange(15) % 2)
    prof = complexity_profile(d)
    assert prof["T4"] == 1.0 and all(np.isfinite(v) for v in prof.values.values())


# -- balance -----------------------------------------------------------------

def test_balance_examples():
    d = Dataset(np.arange(10.0)[:, None], np.array([1] + [0] * 9))
    b = balance_dataset_measures(d)
    assert b["C1"] == pytest.approx(0.531, abs=1e-3)
    even = balance_dataset_measures(Dataset(np.arange(10.0)[:, None], np.arange(10) % 2))
    assert even == {"C1": 0.0, "C2": 0.0}


def test_single_class_balance_warns():
    with pytest.warns(ComplexityWarning):
        b = balance_dataset_measures(Dataset(np.arange(4.0)[:, None], np.zeros(4, dtype=int)))
    assert b == {"C1": 1.0, "C2": 1.0}


def test_resampling_balances_the_classes():
    rng = np.random.default_rng(3)
    d = Dataset(rng.normal(size=(60, 2)), np.r_[np.zeros(48), np.ones(12)].astype(int))
    for method in ("smote", "rus"):
        b = balance_dataset_measures(resample(d, method))
        assert b["C1"] == pytest.approx(0.0, abs=1e-12) and b["C2"] == pytest.approx(0.0, abs=1e-12)


# -- profile -----------------------------------------------------------------

@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_profile_is_label_swap_invariant(seed):
    d = random_dataset(np.random.default_rng(seed), (15, 40), (1, 4))
    a = complexity_profile(d, seed=1)
    b = complexity_profile(Dataset(d.X, 1 - d.y), seed=1)
    for name in MEASURES:
        if name in ("L1", "L2", "L3"):
            continue  # the linear SVM solver is not exactly symmetric in the labels
        assert b[name] == pytest.approx(a[name], abs=1e-9), name


def test_profile_outputs():
    d = gaussian_blobs(n=30, seed=0)
    prof = complexity_profile(d).with_hardness(dsh=0.1, idsh=0.2)
    body = json.loads(prof.to_json())
    assert body["schema_version"] == 1 and body["DSH"] == 0.1 and body["IDSH"] == 0.2
    assert all(name in body for name in MEASURES)
    assert set(prof.family("balance")) == {"C1", "C2"}
    text = profiles_to_csv([prof, complexity_profile(d)])
    lines = text.splitlines()
    assert lines[0].split(",")[:3] == ["name", "F1", "F1v"] and len(lines) == 3


def test_profile_does_not_warn_on_ordinary_data():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        complexity_profile(gaussian_blobs(n=30, seed=1))
