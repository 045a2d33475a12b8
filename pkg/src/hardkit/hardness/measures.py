"""The fifteen instance hardness measures, all oriented so that higher means harder."""
from __future__ import annotations

import math

import numpy as np
from scipy.special import expit, logsumexp

from ..data import Dataset, normalize
from ..learners.tree import DecisionTree
from .context import MeasureContext

MEASURE_NAMES = ("kDN", "DS", "DCP", "TD_P", "TD_U", "CL", "MV", "CB",
                 "F1_i", "N1_i", "N2_i", "LSC_i", "LSR", "U", "H")

# measures used to steer the ensemble in the weighted bagging experiments
OVERLAP_MEASURES = ("kDN", "DS", "DCP", "CL", "LSC_i", "U")

_ALIASES = {name.lower(): name for name in MEASURE_NAMES}
_ALIASES.update({name.lower().removesuffix("_i"): name for name in MEASURE_NAMES if name.endswith("_i")})
_ALIASES.update({"tdp": "TD_P", "tdu": "TD_U"})


def resolve_measure(name: str) -> str:
    """Case-insensitive measure lookup; ``kdn``, ``lsc`` and ``lsc_i`` all work."""
    try:
        return _ALIASES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown instance measure {name!r}; expected one of {MEASURE_NAMES}") from None


def neighborhood_measures(ctx: MeasureContext) -> dict[str, np.ndarray]:
    """kDN, N1_i, N2_i, LSC_i, LSR, U and H from a prebuilt context."""
    y = ctx.y
    n = ctx.n
    own = ctx.class_sizes().astype(float)
    other = (n - own).astype(float)

    kdn = np.mean(y[ctx.knn] != y[:, None], axis=1)

    n1 = np.zeros(n)
    for i, nbrs in enumerate(ctx.mst_neighbors()):
        n1[i] = np.mean(y[nbrs] != y[i])

    d_same, d_enemy = ctx.friend_dist, ctx.enemy_dist
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = d_same / d_enemy
        n2 = ratio / (1.0 + ratio)
    n2 = np.where(np.isinf(ratio), 1.0, n2)
    n2 = np.where((d_same == 0) & (d_enemy == 0), 0.5, n2)

    ls_size = ctx.local_set.sum(axis=1).astype(float)
    usefulness = ctx.local_set.sum(axis=0).astype(float)
    peers = own - 1.0
    safe = np.where(peers > 0, peers, 1.0)
    lsc = np.where(peers > 0, 1.0 - ls_size / safe, 1.0)
    u = np.where(peers > 0, 1.0 - usefulness / safe, 1.0)

    far = ctx.D.max(axis=1)
    lsr = np.where(far > 0, 1.0 - d_enemy / np.where(far > 0, far, 1.0), 1.0)

    h = np.bincount(ctx.enemy, minlength=n) / other

    return {"kDN": kdn, "N1_i": n1, "N2_i": n2, "LSC_i": lsc, "LSR": lsr, "U": u, "H": h}


def _stratified_holdout(y, frac, rng):
    hold = np.zeros(len(y), dtype=bool)
    for c in (0, 1):
        idx = np.flatnonzero(y == c)
        take = int(round(frac * len(idx)))
        if take >= len(idx):
            take = len(idx) - 1
        if take > 0:
            hold[rng.permutation(idx)[:take]] = True
    return hold


def _depth_ratio(tree: DecisionTree, leaves: np.ndarray) -> np.ndarray:
    top = tree.max_leaf_depth()
    if top == 0:
        return np.zeros(len(leaves))
    return tree.depth_[leaves] / top


def tree_measures(dataset: Dataset, seed: int = 0, min_samples_leaf: int = 2, holdout: float = 0.3,
                  max_depth: int | None = None) -> dict[str, np.ndarray]:
    """DS, DCP, TD_P and TD_U from entropy-criterion CART trees.

    The unpruned tree is grown on all instances with ``min_samples_leaf``
    (2 by default, as in C4.5). The pruned tree is grown on a seeded
    stratified ``1 - holdout`` share and pruned by reduced-error pruning on
    the rest; every instance is then routed through it for TD_P.
    """
    X, y = dataset.X, dataset.y
    full = DecisionTree("entropy", max_depth=max_depth, min_samples_leaf=min_samples_leaf).fit(X, y)
    leaves = full.apply(X)
    size = full.n_node_samples_[leaves].astype(float)
    largest = size.max()
    ds = 1.0 - (size - 1.0) / (largest - 1.0) if largest > 1 else np.ones(len(y))
    counts = full.value_[leaves]
    own = counts[np.arange(len(y)), y]
    dcp = 1.0 - own / counts.sum(axis=1)
    td_u = _depth_ratio(full, leaves)

    rng = np.random.default_rng(seed)
    hold = _stratified_holdout(y, holdout, rng)
    grown = DecisionTree("entropy", max_depth=max_depth, min_samples_leaf=min_samples_leaf)
    grown.fit(X[~hold], y[~hold])
    pruned = grown.pruned(X[hold], y[hold]) if hold.any() else grown
    td_p = _depth_ratio(pruned, pruned.apply(X))
    return {"DS": ds, "DCP": dcp, "TD_P": td_p, "TD_U": td_u}


def silverman_bandwidth(values: np.ndarray, floor: float = 1e-6) -> float:
    """Silverman's rule of thumb ``0.9 * min(sd, IQR / 1.34) * n^(-1/5)`` with a floor."""
    n = len(values)
    if n < 2:
        return floor
    sd = float(np.std(values, ddof=1))
    q75, q25 = np.percentile(values, [75, 25])
    iqr = float(q75 - q25) / 1.34
    spread = min(sd, iqr) if min(sd, iqr) > 0 else max(sd, iqr)
    return max(0.9 * spread * n ** -0.2, floor)


def class_log_likelihood(X: np.ndarray, Xc: np.ndarray) -> np.ndarray:
    """Log of the product over features of 1-D Gaussian KDE densities fitted on ``Xc``."""
    out = np.zeros(len(X))
    nc = len(Xc)
    for f in range(X.shape[1]):
        h = silverman_bandwidth(Xc[:, f])
        z = (X[:, f][:, None] - Xc[:, f][None, :]) / h
        out += logsumexp(-0.5 * z * z, axis=1) - math.log(nc * h * math.sqrt(2 * math.pi))
    return out


def likelihood_measures(dataset: Dataset) -> dict[str, np.ndarray]:
    """CL: one minus the own-class share of the class-conditional likelihoods."""
    dataset.require_both_classes("class likelihood")
    X, y = dataset.X, dataset.y
    ll = np.column_stack([class_log_likelihood(X, X[y == c]) for c in (0, 1)])
    own = ll[np.arange(len(y)), y]
    other = ll[np.arange(len(y)), 1 - y]
    return {"CL": expit(other - own)}


def balance_measures(dataset: Dataset) -> dict[str, np.ndarray]:
    dataset.require_both_classes("class balance measures")
    counts = np.bincount(dataset.y, minlength=2).astype(float)
    own = counts[dataset.y]
    return {"MV": 1.0 - own / counts.max(), "CB": 1.0 - own / dataset.n}


def feature_overlap_measure(dataset: Dataset) -> dict[str, np.ndarray]:
    """F1_i: share of features on which the instance falls inside the other class's range."""
    dataset.require_both_classes("feature overlap")
    X, y = dataset.X, dataset.y
    lo = np.array([X[y == c].min(axis=0) for c in (0, 1)])
    hi = np.array([X[y == c].max(axis=0) for c in (0, 1)])
    opp = 1 - y
    inside = (X >= lo[opp]) & (X <= hi[opp])
    return {"F1_i": inside.mean(axis=1)}


def instance_measures(dataset: Dataset, k: int = 5, normalization: str = "standard", seed: int = 0,
                      context: MeasureContext | None = None) -> dict[str, np.ndarray]:
    """All fifteen measures, keyed in :data:`MEASURE_NAMES` order.

    Features are normalized first (standard by default); pass
    ``normalization="none"`` to measure the data as given. A ``context``
    built on the normalized data may be passed to avoid recomputation.
    """
    data = normalize(dataset, normalization) if normalization != "none" else dataset
    ctx = context or MeasureContext.build(data, k)
    out = {}
    out.update(neighborhood_measures(ctx))
    out.update(tree_measures(data, seed=seed))
    out.update(likelihood_measures(data))
    out.update(balance_measures(data))
    out.update(feature_overlap_measure(data))
    return {name: out[name] for name in MEASURE_NAMES}


def instance_measure(dataset: Dataset, name: str, k: int = 5, normalization: str = "standard",
                     seed: int = 0) -> np.ndarray:
    """A single measure by (case-insensitive) name."""
    name = resolve_measure(name)
    data = normalize(dataset, normalization) if normalization != "none" else dataset
    if name in ("kDN", "N1_i", "N2_i", "LSC_i", "LSR", "U", "H"):
        return neighborhood_measures(MeasureContext.build(data, k))[name]
    if name in ("DS", "DCP", "TD_P", "TD_U"):
        return tree_measures(data, seed=seed)[name]
    if name == "CL":
        return likelihood_measures(data)["CL"]
    if name in ("MV", "CB"):
        return balance_measures(data)[name]
    return feature_overlap_measure(data)["F1_i"]
