"""Dataset-level complexity measures.

Every measure is oriented so that larger values mean a harder problem.
Functions take a :class:`~hardkit.data.Dataset` as given; use
:func:`complexity_profile` to standardize features first and compute all
families at once.
"""
from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .data import Dataset, distance_matrix, normalize
from .hardness.context import MeasureContext
from .learners.linear import LinearSVM
from .learners.neighbors import KNN

FAMILIES = {
    "feature": ("F1", "F1v", "F2", "F3", "F4"),
    "linearity": ("L1", "L2", "L3"),
    "neighborhood": ("N1", "N2", "N3", "N4", "T1", "LSC"),
    "network": ("Density", "ClsCoef", "Hubs"),
    "dimensionality": ("T2", "T3", "T4"),
    "balance": ("C1", "C2"),
}
MEASURES = tuple(name for names in FAMILIES.values() for name in names)

# measures commonly dropped from correlation tables because they barely vary
LOW_VARIANCE_MEASURES = ("F2", "C2", "N3", "N4", "Hubs")

SCHEMA_VERSION = 1
EPSILON_FRACTION = 0.15
PCA_VARIANCE = 0.95


class ComplexityWarning(UserWarning):
    pass


# ---------------------------------------------------------------------------
# feature-based
# ---------------------------------------------------------------------------

def fisher_ratio(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Per-column between-class over within-class sum of squares.

    A zero numerator gives 0; a zero denominator with a positive numerator
    gives ``inf``. Columns are processed one at a time so a column's ratio
    does not depend on which other columns are present.
    """
    out = np.empty(X.shape[1])
    for f in range(X.shape[1]):
        col = np.ascontiguousarray(X[:, f])
        mu = col.mean()
        num = den = 0.0
        for c in (0, 1):
            xc = col[y == c]
            mc = xc.mean()
            num += len(xc) * (mc - mu) ** 2
            den += float(((xc - mc) ** 2).sum())
        if num <= 0:
            out[f] = 0.0
        elif den <= 0:
            out[f] = np.inf
        else:
            out[f] = num / den
    return out


def f1_measure(dataset: Dataset) -> float:
    """Inverse maximum Fisher ratio."""
    dataset.require_both_classes("F1")
    return _inverse(float(fisher_ratio(dataset.X, dataset.y).max()))


def _inverse(r: float) -> float:
    return 0.0 if math.isinf(r) else 1.0 / (1.0 + r)


def _overlap_bounds(X, y):
    lo = np.maximum(X[y == 0].min(axis=0), X[y == 1].min(axis=0))
    hi = np.minimum(X[y == 0].max(axis=0), X[y == 1].max(axis=0))
    return lo, hi


def _in_overlap(X, lo, hi):
    return (X >= lo) & (X <= hi) & (lo <= hi)


def feature_measures(dataset: Dataset) -> dict[str, float]:
    """F1, F1v, F2, F3 and F4."""
    dataset.require_both_classes("feature measures")
    X, y = dataset.X, dataset.y
    f1 = _inverse(float(fisher_ratio(X, y).max()))

    X0, X1 = X[y == 0], X[y == 1]
    pooled = ((X0 - X0.mean(axis=0)).T @ (X0 - X0.mean(axis=0))
              + (X1 - X1.mean(axis=0)).T @ (X1 - X1.mean(axis=0))) / len(y)
    pooled = np.atleast_2d(pooled) + 1e-6 * np.eye(X.shape[1])
    w = np.linalg.solve(pooled, X1.mean(axis=0) - X0.mean(axis=0))
    f1v = _inverse(float(fisher_ratio((X @ w)[:, None], y)[0])) if np.any(w) else 1.0

    mins = np.array([X0.min(axis=0), X1.min(axis=0)])
    maxs = np.array([X0.max(axis=0), X1.max(axis=0)])
    span = maxs.max(axis=0) - mins.min(axis=0)
    overlap = np.maximum(0.0, maxs.min(axis=0) - mins.max(axis=0))
    ratio = np.where(span > 0, overlap / np.where(span > 0, span, 1.0), 1.0)
    f2 = float(np.prod(ratio))

    lo, hi = _overlap_bounds(X, y)
    inside = _in_overlap(X, lo, hi)
    f3 = float(inside.sum(axis=0).min() / len(y))
    return {"F1": f1, "F1v": f1v, "F2": f2, "F3": f3, "F4": collective_feature_efficiency(X, y)}


def collective_feature_efficiency(X: np.ndarray, y: np.ndarray) -> float:
    """F4: share of instances still in an overlap region after repeatedly
    discarding the ones the most efficient unused feature separates."""
    n = len(y)
    alive = np.ones(n, dtype=bool)
    unused = list(range(X.shape[1]))
    while unused:
        Xa, ya = X[alive], y[alive]
        if ya.min() == ya.max():
            return 0.0
        lo, hi = _overlap_bounds(Xa, ya)
        counts = _in_overlap(Xa, lo, hi).sum(axis=0)
        best = min(unused, key=lambda f: (counts[f], f))
        unused.remove(best)
        keep = _in_overlap(Xa[:, [best]], lo[[best]], hi[[best]])[:, 0]
        idx = np.flatnonzero(alive)
        alive[idx[~keep]] = False
        if not alive.any():
            return 0.0
    ya = y[alive]
    if ya.min() == ya.max():
        return 0.0
    return float(alive.sum() / n)


# ---------------------------------------------------------------------------
# linearity and interpolation
# ---------------------------------------------------------------------------

def interpolate_pairs(dataset: Dataset, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """One midpoint per instance between it and a random member of its class.

    Instances are visited in index order and the partner is drawn by
    position within the class, so relabelling the classes does not change
    the points.
    """
    rng = np.random.default_rng(seed)
    X, y = dataset.X, dataset.y
    members = [np.flatnonzero(y == c) for c in (0, 1)]
    pts = np.empty_like(X)
    for i in range(len(y)):
        group = members[y[i]]
        j = group[rng.integers(len(group))]
        pts[i] = 0.5 * (X[i] + X[j])
    return pts, y.copy()


def linearity_measures(dataset: Dataset, seed: int = 0, svm: LinearSVM | None = None) -> dict[str, float]:
    """L1, L2 and L3 from the pool's linear SVM trained on the whole dataset."""
    dataset.require_both_classes("linearity measures")
    X, y = dataset.X, dataset.y
    svm = svm or LinearSVM().fit(X, y)
    pred = svm.predict(X)
    wrong = pred != y
    w, b = svm.raw_hyperplane()
    norm = float(np.linalg.norm(w))
    if wrong.any() and norm > 0:
        s = float(np.sum(np.abs(X[wrong] @ w + b)) / norm / len(y))
    else:
        s = 0.0
    l1 = s / (1.0 + s)
    l2 = float(wrong.mean())
    Xi, yi = interpolate_pairs(dataset, seed)
    l3 = float(np.mean(svm.predict(Xi) != yi))
    return {"L1": l1, "L2": l2, "L3": l3}


# ---------------------------------------------------------------------------
# neighbourhood
# ---------------------------------------------------------------------------

def hypersphere_count(ctx: MeasureContext) -> int:
    """Spheres left after absorbing every sphere contained in a larger one of the same class.

    Each instance's sphere has radius equal to its nearest-enemy distance.
    Spheres are visited by decreasing radius (ties to the lower index).
    """
    r = ctx.enemy_dist
    order = np.lexsort((np.arange(ctx.n), -r))
    kept: list[int] = []
    for j in order:
        absorbed = False
        for i in kept:
            if ctx.y[i] == ctx.y[j] and ctx.D[i, j] + r[j] <= r[i]:
                absorbed = True
                break
        if not absorbed:
            kept.append(int(j))
    return len(kept)


def _n2(ctx: MeasureContext) -> float:
    intra = float(np.sum(np.where(np.isfinite(ctx.friend_dist), ctx.friend_dist, 0.0)))
    extra = float(np.sum(ctx.enemy_dist))
    if extra > 0:
        s = intra / extra
        return s / (1.0 + s)
    return 0.5 if intra == 0 else 1.0


def n2_measure(dataset: Dataset) -> float:
    """Intra- over extra-class nearest-neighbour distance sums, mapped by ``s / (1 + s)``."""
    return _n2(MeasureContext.build(dataset, k=1))


def neighborhood_dataset_measures(dataset: Dataset, seed: int = 0,
                                  context: MeasureContext | None = None) -> dict[str, float]:
    """N1, N2, N3, N4, T1 and LSC."""
    if dataset.n < 3:
        raise ValueError("neighbourhood measures need n >= 3")
    ctx = context or MeasureContext.build(dataset, k=1)
    n, y = ctx.n, ctx.y

    cross = ctx.mst[y[ctx.mst[:, 0]] != y[ctx.mst[:, 1]]]
    n1 = len(np.unique(cross)) / n

    n2 = _n2(ctx)

    D = ctx.D.copy()
    np.fill_diagonal(D, np.inf)
    nn = np.argmin(D, axis=1)
    n3 = float(np.mean(y[nn] != y))

    Xi, yi = interpolate_pairs(dataset, seed)
    n4 = float(np.mean(KNN(1).fit(dataset.X, y).predict(Xi) != yi))

    t1 = hypersphere_count(ctx) / n
    lsc = 1.0 - float(ctx.local_set.sum() + n) / (n * n)
    return {"N1": n1, "N2": n2, "N3": n3, "N4": n4, "T1": t1, "LSC": lsc}


# ---------------------------------------------------------------------------
# network
# ---------------------------------------------------------------------------

def epsilon_graph(dataset: Dataset, fraction: float = EPSILON_FRACTION, D: np.ndarray | None = None) -> np.ndarray:
    """Boolean adjacency: same-class pairs closer than ``fraction`` of the largest distance."""
    D = distance_matrix(dataset) if D is None else D
    eps = fraction * D.max()
    A = (D < eps) & (dataset.y[:, None] == dataset.y[None, :])
    np.fill_diagonal(A, False)
    return A


def network_measures(dataset: Dataset, D: np.ndarray | None = None) -> dict[str, float]:
    """Density, ClsCoef and Hubs of the same-class epsilon graph."""
    n = dataset.n
    if n < 3:
        raise ValueError("network measures need n >= 3")
    A = epsilon_graph(dataset, D=D)
    deg = A.sum(axis=1)
    edges = int(deg.sum() // 2)
    density = 1.0 - edges / (n * (n - 1) / 2)

    Ai = A.astype(np.int64)
    triangles = np.einsum("ij,jk,ki->i", Ai, Ai, Ai) / 2
    eligible = deg >= 2
    if eligible.any():
        pairs = deg[eligible] * (deg[eligible] - 1) / 2
        cls_coef = 1.0 - float(np.mean(triangles[eligible] / pairs))
    else:
        cls_coef = 1.0

    score = Ai @ deg
    hubs = 1.0 - float(np.mean(score / score.max())) if score.max() > 0 else 1.0
    return {"Density": density, "ClsCoef": cls_coef, "Hubs": hubs}


# ---------------------------------------------------------------------------
# dimensionality and balance
# ---------------------------------------------------------------------------

def pca_dimension(X: np.ndarray, variance: float = PCA_VARIANCE) -> int:
    """Components needed to explain ``variance`` of the standardized data (at least 1)."""
    std = X.std(axis=0)
    Z = np.where(std > 0, (X - X.mean(axis=0)) / np.where(std > 0, std, 1.0), 0.0)
    if Z.shape[1] == 1 or not np.any(Z):
        return 1
    eig = np.clip(np.linalg.eigvalsh(np.cov(Z, rowvar=False, bias=True))[::-1], 0.0, None)
    total = eig.sum()
    if total <= 0:
        return 1
    cum = np.cumsum(eig) / total
    return int(min(np.searchsorted(cum, variance - 1e-12) + 1, Z.shape[1]))


def dimensionality_measures(dataset: Dataset) -> dict[str, float]:
    n, m = dataset.n, dataset.m
    mp = pca_dimension(dataset.X)
    return {"T2": m / n, "T3": mp / n, "T4": mp / m}


def balance_dataset_measures(dataset: Dataset) -> dict[str, float]:
    """C1 (one minus normalized class entropy) and C2 (from the imbalance ratio).

    A single-class dataset gets 1 for both, with a :class:`ComplexityWarning`.
    """
    counts = np.bincount(dataset.y, minlength=2).astype(float)
    n = counts.sum()
    if counts.min() == 0:
        warnings.warn("single-class dataset: C1 and C2 set to 1", ComplexityWarning, stacklevel=2)
        return {"C1": 1.0, "C2": 1.0}
    p = counts / n
    c1 = 1.0 + float(np.sum(p * np.log2(p)))
    ir = 0.5 * float(np.sum(counts / (n - counts)))
    return {"C1": max(c1, 0.0), "C2": 1.0 - 1.0 / ir}


# ---------------------------------------------------------------------------
# profile
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComplexityProfile:
    """All dataset measures, optionally with DSH and IDSH."""

    values: dict
    name: str = ""
    extra: dict = field(default_factory=dict)

    def __getitem__(self, key: str) -> float:
        return self.values[key] if key in self.values else self.extra[key]

    def family(self, name: str) -> dict[str, float]:
        return {k: self.values[k] for k in FAMILIES[name]}

    def with_hardness(self, dsh: float | None = None, idsh: float | None = None) -> "ComplexityProfile":
        extra = dict(self.extra)
        if dsh is not None:
            extra["DSH"] = float(dsh)
        if idsh is not None:
            extra["IDSH"] = float(idsh)
        return ComplexityProfile(self.values, self.name, extra)

    def flat(self) -> dict[str, float]:
        out = {k: float(self.values[k]) for k in MEASURES}
        out.update(self.extra)
        return out

    def to_dict(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "name": self.name, **self.flat()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def csv_header(self) -> list[str]:
        return ["name", *self.flat()]

    def csv_row(self) -> list:
        return [self.name, *self.flat().values()]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.csv_header())
        w.writerow(self.csv_row())
        return buf.getvalue()


def complexity_profile(dataset: Dataset, normalization: str = "standard", seed: int = 0) -> ComplexityProfile:
    """Every dataset measure on (by default) standardized features."""
    dataset.require_both_classes("complexity profile")
    data = normalize(dataset, normalization) if normalization != "none" else dataset
    ctx = MeasureContext.build(data, k=1)
    values = {}
    values.update(feature_measures(data))
    values.update(linearity_measures(data, seed))
    values.update(neighborhood_dataset_measures(data, seed, ctx))
    values.update(network_measures(data, ctx.D))
    values.update(dimensionality_measures(data))
    values.update(balance_dataset_measures(data))
    return ComplexityProfile({k: values[k] for k in MEASURES}, dataset.name)


def profiles_to_csv(profiles) -> str:
    profiles = list(profiles)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if profiles:
        w.writerow(profiles[0].csv_header())
        for p in profiles:
            w.writerow(p.csv_row())
    return buf.getvalue()
