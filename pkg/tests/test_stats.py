import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from hardkit.stats import (BIN_LABELS, correlation_matrix, hardness_bin, hardness_histogram, midranks, spearman,
                           strength_band, wilcoxon)

# -- Spearman ----------------------------------------------------------------


def test_spearman_examples():
    assert spearman([1, 2, 3, 4, 5], [1, 3, 2, 5, 4]).rho == 0.8
    assert spearman([1, 2, 3], [3, 2, 1]).rho == -1.0
    r = spearman([1, 2, 3, 4], [5, 5, 5, 5])
    assert (r.rho, r.p_value, r.degenerate) == (0.0, 1.0, True)


def test_spearman_with_ties_uses_midranks():
    assert midranks([10, 20, 20, 30]).tolist() == [1, 2.5, 2.5, 4]
    r = spearman([1, 2, 2, 3], [1, 2, 3, 4])
    assert r.rho == pytest.approx(0.9486832980505138, abs=1e-12)


def test_spearman_errors():
    with pytest.raises(ValueError):
        spearman([1, 2], [1, 2])
    with pytest.raises(ValueError):
        spearman([1, 2, 3], [1, 2])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6)), min_size=3, max_size=40, unique_by=(
    lambda t: t[0], lambda t: t[1])))
def test_spearman_matches_rank_difference_formula(pairs):
    x = [a for a, _ in pairs]
    y = [b for _, b in pairs]
    r = spearman(x, y)
    assert r.rho == pytest.approx(oracles.spearman_no_ties(x, y), abs=1e-12)
    assert 0 <= r.p_value <= 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_spearman_invariances(seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=25)
    y = x + rng.normal(size=25)
    r = spearman(x, y).rho
    assert spearman(y, x).rho == pytest.approx(r, abs=1e-12)
    assert spearman(np.exp(x), 3 * y + 1).rho == pytest.approx(r, abs=1e-12)  # monotone maps
    assert spearman(-x, y).rho == pytest.approx(-r, abs=1e-12)
    perm = rng.permutation(25)
    assert spearman(x[perm], y[perm]).rho == pytest.approx(r, abs=1e-12)


def test_p_value_against_t_approximation():
    x = np.arange(20.0)
    y = x.copy()
    y[::3] = y[::3][::-1]
    r = spearman(x, y)
    t = r.rho * math.sqrt(18 / (1 - r.rho ** 2))
    from scipy.stats import t as tdist
    assert r.p_value == pytest.approx(2 * tdist.sf(abs(t), 18), rel=1e-12)


def test_strength_bands():
    assert strength_band(0.1) == "very weak"
    assert strength_band(-0.2) == "weak"
    assert strength_band(0.45) == "moderate"
    assert strength_band(0.6) == "strong"
    assert strength_band(-0.95) == "very strong"


def test_correlation_matrix_is_symmetric_with_unit_diagonal():
    rng = np.random.default_rng(0)
    cols = {"a": rng.normal(size=15), "b": rng.normal(size=15), "c": rng.normal(size=15)}
    M = correlation_matrix(cols)
    for a in cols:
        assert M[a][a].rho == 1.0
        for b in cols:
            assert M[a][b].rho == M[b][a].rho
    with pytest.raises(ValueError):
        correlation_matrix({"a": [1, 2, 3]})


def test_wilcoxon():
    a = [0.8, 0.7, 0.9, 0.85, 0.75, 0.95, 0.6, 0.88]
    b = [0.7, 0.6, 0.8, 0.80, 0.70, 0.90, 0.5, 0.80]
    res = wilcoxon(a, b)
    assert res["p_value"] < 0.05 and res["median_diff"] > 0
    assert wilcoxon(a, a)["p_value"] == 1.0


# -- histogram ---------------------------------------------------------------

def test_bin_edges():
    assert hardness_bin(0.0) == 0 and hardness_bin(1.0) == 11
    assert hardness_bin(1e-9) == 1 and hardness_bin(0.0999) == 1
    assert hardness_bin(0.1) == 2 and hardness_bin(0.5) == 6 and hardness_bin(0.999) == 10
    assert len(BIN_LABELS) == 12 and BIN_LABELS[0] == "0" and BIN_LABELS[-1] == "1"


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 1))
def test_every_value_lands_in_the_bin_that_contains_it(v):
    b = hardness_bin(v)
    if v == 0:
        assert b == 0
    elif v == 1:
        assert b == 11
    else:
        assert 1 <= b <= 10 and (b - 1) / 10 <= v < b / 10


def test_histogram_example():
    h = hardness_histogram([0, 0, 0.05, 0.25, 0.5, 1, 1, 1], labels=[0, 0, 0, 0, 1, 1, 1, 1], split_by_class=True)
    assert h.counts == (2, 1, 0, 1, 0, 0, 1, 0, 0, 0, 0, 3)
    assert h.n == 8 and h.cumulative[-1] == 100.0
    assert h.share_below(0.4) == 4 / 8
    assert h.by_class[0].counts[0] == 2 and h.by_class[1].counts[-1] == 3
    body = h.to_dict()
    assert sum(body["percent"]) == pytest.approx(100.0) and set(body["by_class"]) == {"0", "1"}


def test_histogram_errors():
    with pytest.raises(ValueError):
        hardness_histogram([])
    with pytest.raises(ValueError):
        hardness_histogram([0.1, 0.2], split_by_class=True)
