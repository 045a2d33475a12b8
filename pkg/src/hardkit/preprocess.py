"""Resampling and feature selection operators.

Resamplers work on the minority class as identified by :meth:`Dataset.minority_label`.
All randomness comes from ``numpy.random.default_rng(spec.seed)``, so a spec
applied twice to the same data gives the same rows.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from ._specstr import parse_spec_string
from .data import Dataset, DatasetError, distance_matrix
from .learners.ensemble import RandomForest
from .learners.linear import LinearSVM

RESAMPLERS = ("smote", "border_smote", "rus", "smote_tomek", "smote_enn")
SELECTORS = ("cfs", "skb_anova", "skb_mutual", "linsvm_importance", "tree_importance", "none")


class PreprocessWarning(UserWarning):
    pass


# ---------------------------------------------------------------------------
# resampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ResampleSpec:
    """``method`` with neighbour count ``k``, seed and minority:majority target ``ratio``."""

    method: str = "smote"
    k: int = 5
    seed: int = 0
    ratio: float = 1.0

    def __post_init__(self):
        if self.method not in RESAMPLERS:
            raise ValueError(f"unknown resampler {self.method!r}; expected one of {RESAMPLERS}")
        if int(self.k) < 1:
            raise ValueError("k must be >= 1")
        if not 0 < self.ratio <= 1:
            raise ValueError("ratio must be in (0, 1]")

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> "ResampleSpec":
        """``"smote_enn:k=5"`` style strings."""
        method, params = parse_spec_string(text)
        params.setdefault("seed", seed)
        return cls(method, **params)


def _knn_within(X: np.ndarray, k: int) -> np.ndarray:
    """Indices of the ``k`` nearest other rows of ``X`` (ties to the lower index)."""
    D = distance_matrix(X)
    np.fill_diagonal(D, np.inf)
    return np.argsort(D, axis=1, kind="stable")[:, :k]


def smote_samples(X_min: np.ndarray, n_new: int, k: int, rng: np.random.Generator,
                  bases: np.ndarray | None = None):
    """Draw ``n_new`` SMOTE points from minority rows ``X_min``.

    Each point is ``x + delta * (z - x)`` with ``x`` drawn uniformly from
    ``bases`` (default: every row), ``z`` uniform among the ``k`` nearest
    minority neighbours of ``x`` and ``delta ~ U[0, 1]``.

    Returns ``(points, base_idx, neighbor_idx, delta)`` so callers can check
    provenance.
    """
    n_min = len(X_min)
    if n_min < 2:
        raise DatasetError("SMOTE needs at least 2 minority instances")
    k = min(int(k), n_min - 1)
    bases = np.arange(n_min) if bases is None else np.asarray(bases, dtype=np.int64)
    nbrs = _knn_within(X_min, k)
    base = bases[rng.integers(len(bases), size=n_new)]
    pick = rng.integers(k, size=n_new)
    nbr = nbrs[base, pick]
    delta = rng.random(n_new)
    pts = X_min[base] + delta[:, None] * (X_min[nbr] - X_min[base])
    return pts, base, nbr, delta


def _append(data: Dataset, X_new: np.ndarray, label: int) -> Dataset:
    if len(X_new) == 0:
        return data
    X = np.vstack([data.X, X_new])
    y = np.concatenate([data.y, np.full(len(X_new), label, dtype=np.int64)])
    return Dataset(X, y, data.feature_names, data.name)


def _oversample_count(data: Dataset, ratio: float) -> tuple[int, int]:
    minority = data.minority_label()
    counts = np.bincount(data.y, minlength=2)
    target = int(math.ceil(ratio * counts[1 - minority]))
    return minority, max(0, target - int(counts[minority]))


def _smote(data: Dataset, spec: ResampleSpec, rng) -> Dataset:
    minority, n_new = _oversample_count(data, spec.ratio)
    X_min = data.X[data.y == minority]
    if n_new == 0:
        return data
    pts, *_ = smote_samples(X_min, n_new, spec.k, rng)
    return _append(data, pts, minority)


def danger_set(data: Dataset, m_neighbors: int = 10) -> np.ndarray:
    """Minority positions (within the minority subset) whose ``m`` nearest
    neighbours are at least half but not all majority."""
    minority = data.minority_label()
    m = min(m_neighbors, data.n - 1)
    nbrs = _knn_within(data.X, m)
    idx = np.flatnonzero(data.y == minority)
    maj = np.sum(data.y[nbrs[idx]] != minority, axis=1)
    return np.flatnonzero((maj * 2 >= m) & (maj < m))


def _border_smote(data: Dataset, spec: ResampleSpec, rng) -> Dataset:
    minority, n_new = _oversample_count(data, spec.ratio)
    if n_new == 0:
        return data
    X_min = data.X[data.y == minority]
    if len(X_min) < 2:
        raise DatasetError("SMOTE needs at least 2 minority instances")
    danger = danger_set(data)
    if len(danger) == 0:
        warnings.warn("borderline SMOTE found no danger instances; using plain SMOTE", PreprocessWarning,
                      stacklevel=3)
        danger = None
    pts, *_ = smote_samples(X_min, n_new, spec.k, rng, bases=danger)
    return _append(data, pts, minority)


def _rus(data: Dataset, spec: ResampleSpec, rng) -> Dataset:
    minority = data.minority_label()
    counts = np.bincount(data.y, minlength=2)
    keep_maj = min(int(counts[1 - minority]), int(math.ceil(counts[minority] / spec.ratio)))
    maj_idx = np.flatnonzero(data.y != minority)
    chosen = np.sort(rng.choice(maj_idx, size=keep_maj, replace=False))
    keep = np.sort(np.concatenate([np.flatnonzero(data.y == minority), chosen]))
    return data.subset(keep)


def tomek_links(data: Dataset) -> np.ndarray:
    """``(i, j)`` pairs, ``i < j``, of mutual nearest neighbours with different labels."""
    nn = _knn_within(data.X, 1)[:, 0]
    i = np.arange(data.n)
    mutual = (nn[nn] == i) & (i < nn) & (data.y != data.y[nn])
    return np.column_stack([i[mutual], nn[mutual]])


def enn_mask(data: Dataset, k: int = 3) -> np.ndarray:
    """True for rows whose ``k`` nearest neighbours vote for their own label."""
    k = min(k, data.n - 1)
    nbrs = _knn_within(data.X, k)
    votes = data.y[nbrs].sum(axis=1)
    pred = (2 * votes > k).astype(np.int64)
    if k % 2 == 0:
        ties = 2 * votes == k
        pred[ties] = data.y[nbrs[ties, 0]]
    return pred == data.y


def _clean(balanced: Dataset, keep: np.ndarray, what: str) -> Dataset:
    cleaned = np.flatnonzero(keep)
    counts = np.bincount(balanced.y[cleaned], minlength=2) if len(cleaned) else np.zeros(2)
    if len(cleaned) < 2 or counts.min() == 0:
        warnings.warn(f"{what} cleaning emptied a class; returning the balanced set before cleaning",
                      PreprocessWarning, stacklevel=3)
        return balanced
    return balanced.subset(cleaned)


def _smote_tomek(data: Dataset, spec: ResampleSpec, rng) -> Dataset:
    balanced = _smote(data, spec, rng)
    links = tomek_links(balanced)
    majority = 1 - data.minority_label()
    keep = np.ones(balanced.n, dtype=bool)
    for a, b in links:
        keep[a if balanced.y[a] == majority else b] = False
    return _clean(balanced, keep, "Tomek-link")


def _smote_enn(data: Dataset, spec: ResampleSpec, rng) -> Dataset:
    balanced = _smote(data, spec, rng)
    return _clean(balanced, enn_mask(balanced, 3), "ENN")


_RESAMPLE = {"smote": _smote, "border_smote": _border_smote, "rus": _rus,
             "smote_tomek": _smote_tomek, "smote_enn": _smote_enn}


def resample(train: Dataset, spec: ResampleSpec | str) -> Dataset:
    """Rebalance ``train``. Original rows come first, synthetic rows after them.

    Cleaning steps (Tomek links, ENN) may leave the classes unequal. If
    cleaning would remove a class entirely the uncleaned set is returned and
    a :class:`PreprocessWarning` is raised.
    """
    if isinstance(spec, str):
        spec = ResampleSpec.parse(spec)
    train.require_both_classes(f"resampling with {spec.method}")
    rng = np.random.default_rng(spec.seed)
    return _RESAMPLE[spec.method](train, spec, rng)


# ---------------------------------------------------------------------------
# feature selection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FeatureSelectSpec:
    """Selector name, number of features to keep (None = ``ceil(m / 2)``) and seed."""

    method: str = "none"
    k: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.method not in SELECTORS:
            raise ValueError(f"unknown feature selector {self.method!r}; expected one of {SELECTORS}")
        if self.k is not None and int(self.k) < 1:
            raise ValueError("k must be >= 1")

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> "FeatureSelectSpec":
        method, params = parse_spec_string(text)
        params.setdefault("seed", seed)
        return cls(method, **params)


def anova_f(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """One-way ANOVA F statistic of each column against the binary label.

    Zero between-class spread gives 0; zero within-class spread with nonzero
    between-class spread gives ``inf``.
    """
    n = len(y)
    grand = X.mean(axis=0)
    ssb = np.zeros(X.shape[1])
    ssw = np.zeros(X.shape[1])
    for c in (0, 1):
        Xc = X[y == c]
        mu = Xc.mean(axis=0)
        ssb += len(Xc) * (mu - grand) ** 2
        ssw += ((Xc - mu) ** 2).sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        f = (ssb / 1.0) / (ssw / (n - 2))
    f = np.where(ssb <= 0, 0.0, f)
    return np.where((ssw <= 0) & (ssb > 0), np.inf, f)


def _equal_frequency_bins(col: np.ndarray, bins: int) -> np.ndarray:
    edges = np.quantile(col, np.linspace(0, 1, bins + 1)[1:-1])
    return np.searchsorted(np.unique(edges), col, side="right")


def mutual_information(X: np.ndarray, y: np.ndarray, bins: int = 10) -> np.ndarray:
    """Plug-in mutual information (nats) between each discretized column and the label."""
    n = len(y)
    out = np.zeros(X.shape[1])
    py = np.bincount(y, minlength=2) / n
    for f in range(X.shape[1]):
        b = _equal_frequency_bins(X[:, f], bins)
        joint = np.zeros((b.max() + 1, 2))
        np.add.at(joint, (b, y), 1.0)
        joint /= n
        pb = joint.sum(axis=1)
        nz = joint > 0
        out[f] = float(np.sum(joint[nz] * np.log(joint[nz] / (pb[:, None] * py[None, :])[nz])))
    return out


def feature_scores(train: Dataset, method: str, seed: int = 0) -> np.ndarray:
    """Relevance scores used by the ranking selectors (higher = keep first)."""
    X, y = train.X, train.y
    if method == "skb_anova":
        return anova_f(X, y)
    if method == "skb_mutual":
        return mutual_information(X, y)
    if method == "linsvm_importance":
        return np.abs(LinearSVM().fit(X, y).coef_)
    if method == "tree_importance":
        return RandomForest(n_estimators=50, random_state=seed).fit(X, y).feature_importances_
    raise ValueError(f"{method!r} is not a ranking selector")


def rank_features(scores: np.ndarray, constant: np.ndarray | None = None) -> np.ndarray:
    """Column order by descending score, ties to the lower index, constant columns last."""
    s = np.asarray(scores, dtype=float).copy()
    if constant is not None:
        s[constant] = -np.inf
    return np.lexsort((np.arange(len(s)), -s))


def _rank_correlations(X: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Absolute Spearman correlations feature-class and feature-feature (constant columns -> 0)."""
    R = np.column_stack([rankdata(X[:, f]) for f in range(X.shape[1])] + [rankdata(y)])
    R = R - R.mean(axis=0)
    norm = np.sqrt((R * R).sum(axis=0))
    safe = np.where(norm > 0, norm, 1.0)
    C = (R.T @ R) / np.outer(safe, safe)
    C[norm == 0, :] = 0.0
    C[:, norm == 0] = 0.0
    C = np.abs(C)
    return C[:-1, -1], C[:-1, :-1]


def cfs_merit(subset, r_cf: np.ndarray, r_ff: np.ndarray) -> float:
    """``k * mean(r_cf) / sqrt(k + k (k - 1) mean(r_ff))`` over the subset."""
    s = list(subset)
    k = len(s)
    if k == 0:
        return 0.0
    rcf = r_cf[s].mean()
    if k == 1:
        return float(rcf)
    sub = r_ff[np.ix_(s, s)]
    rff = (sub.sum() - np.trace(sub)) / (k * (k - 1))
    return float(k * rcf / math.sqrt(k + k * (k - 1) * rff))


def cfs_select(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Greedy forward search on the CFS merit; stops when no addition strictly improves it."""
    r_cf, r_ff = _rank_correlations(X, y)
    chosen: list[int] = []
    best = -np.inf
    while len(chosen) < X.shape[1]:
        cand = [f for f in range(X.shape[1]) if f not in chosen]
        merits = [cfs_merit(chosen + [f], r_cf, r_ff) for f in cand]
        j = int(np.argmax(merits))
        if merits[j] <= best:
            break
        best = merits[j]
        chosen.append(cand[j])
    return np.array(sorted(chosen), dtype=np.int64)


def select_features(train: Dataset, spec: FeatureSelectSpec | str) -> tuple[Dataset, np.ndarray]:
    """Restrict ``train`` to the selected columns; returns the data and the
    kept column indices (ascending) for use on test rows."""
    if isinstance(spec, str):
        spec = FeatureSelectSpec.parse(spec)
    m = train.m
    if spec.method == "none":
        return train, np.arange(m)
    if spec.k is not None and spec.k > m:
        raise ValueError(f"cannot keep k={spec.k} of {m} features")
    train.require_both_classes(f"feature selection with {spec.method}")
    if spec.method == "cfs":
        kept = cfs_select(train.X, train.y)
    else:
        constant = np.ptp(train.X, axis=0) == 0
        if constant.any():
            warnings.warn(f"{int(constant.sum())} constant feature(s) ranked last", PreprocessWarning,
                          stacklevel=2)
        k = spec.k if spec.k is not None else max(1, math.ceil(m / 2))
        order = rank_features(feature_scores(train, spec.method, spec.seed), constant)
        kept = np.sort(order[:k])
    return train.select_columns(kept), kept
