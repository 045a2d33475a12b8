"""Binary CART with weighted samples, optional decision-list growth and
reduced-error pruning.

Split search sorts each candidate feature once per node and sweeps cumulative
class weights. Thresholds sit at midpoints between consecutive distinct
values; ties between equally good splits go to the lower feature index and
then the lower threshold.
"""
from __future__ import annotations

import math

import numpy as np

_GAIN_TOL = 1e-12


def _cost(c0, c1, criterion):
    """Weighted impurity ``w * impurity`` for class weights ``c0``/``c1``."""
    w = c0 + c1
    if criterion == "gini":
        with np.errstate(divide="ignore", invalid="ignore"):
            out = w - (c0 * c0 + c1 * c1) / w
        return np.where(w > 0, out, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        t0 = np.where(c0 > 0, c0 * np.log2(c0 / w), 0.0)
        t1 = np.where(c1 > 0, c1 * np.log2(c1 / w), 0.0)
    return -(t0 + t1)


def _n_features(max_features, m):
    if max_features is None:
        return m
    if max_features == "sqrt":
        return max(1, int(math.sqrt(m)))
    if max_features == "log2":
        return max(1, int(math.log2(m))) if m > 1 else 1
    if isinstance(max_features, float):
        return min(m, max(1, int(max_features * m)))
    return min(m, max(1, int(max_features)))


class DecisionTree:
    """CART classifier for labels in {0, 1}.

    Parameters
    ----------
    criterion : {"gini", "entropy"}
    max_depth : int or None
        None grows until leaves are pure or cannot be split.
    min_samples_split, min_samples_leaf : int
        Counted in samples, not weight.
    max_features : None, int, float, "sqrt" or "log2"
        Features drawn (without replacement) at each node.
    rule_list : bool
        Grow a decision list: after each split the child with the lower
        impurity becomes a leaf and only the other child is expanded.
    random_state : int or None
        Seed for feature subsampling.
    """

    def __init__(self, criterion="gini", max_depth=None, min_samples_split=2, min_samples_leaf=1,
                 max_features=None, rule_list=False, random_state=None):
        if criterion not in ("gini", "entropy"):
            raise ValueError(f"unknown criterion {criterion!r}")
        if max_depth is not None and max_depth < 0:
            raise ValueError("max_depth must be >= 0 or None")
        self.criterion = criterion
        self.max_depth = max_depth
        self.min_samples_split = max(2, int(min_samples_split))
        self.min_samples_leaf = max(1, int(min_samples_leaf))
        self.max_features = max_features
        self.rule_list = rule_list
        self.random_state = random_state

    # -- fitting ---------------------------------------------------------
    def fit(self, X, y, sample_weight=None):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=np.int64)
        n, m = X.shape
        w = np.ones(n) if sample_weight is None else np.asarray(sample_weight, dtype=float)
        self.n_features_in_ = m
        rng = np.random.default_rng(self.random_state)
        k_feat = _n_features(self.max_features, m)

        feature, threshold, left, right, value, nsamp, depth = [], [], [], [], [], [], []
        importances = np.zeros(m)

        def new_node(idx, d):
            c1 = float(np.sum(w[idx] * y[idx]))
            c0 = float(np.sum(w[idx])) - c1
            feature.append(-1)
            threshold.append(np.nan)
            left.append(-1)
            right.append(-1)
            value.append((c0, c1))
            nsamp.append(len(idx))
            depth.append(d)
            return len(feature) - 1

        root = new_node(np.arange(n), 0)
        stack = [(root, np.arange(n), False)]
        while stack:
            node, idx, forced_leaf = stack.pop()
            if forced_leaf:
                continue
            c0, c1 = value[node]
            d = depth[node]
            if (c0 <= 0 or c1 <= 0 or len(idx) < self.min_samples_split
                    or len(idx) < 2 * self.min_samples_leaf
                    or (self.max_depth is not None and d >= self.max_depth)):
                continue
            if k_feat < m:
                cand = np.sort(rng.choice(m, size=k_feat, replace=False))
            else:
                cand = range(m)
            split = self._best_split(X, y, w, idx, cand)
            if split is None:
                continue
            f, thr, gain = split
            go_left = X[idx, f] <= thr
            li, ri = idx[go_left], idx[~go_left]
            feature[node] = int(f)
            threshold[node] = float(thr)
            importances[f] += gain
            ln = new_node(li, d + 1)
            rn = new_node(ri, d + 1)
            left[node], right[node] = ln, rn
            leaf_child = None
            if self.rule_list:
                imp = [float(_cost(*value[c], self.criterion)) / max(sum(value[c]), 1e-300) for c in (ln, rn)]
                leaf_child = ln if imp[0] <= imp[1] else rn
            # push right first so the left subtree is numbered first
            stack.append((rn, ri, leaf_child == rn))
            stack.append((ln, li, leaf_child == ln))

        self.feature_ = np.array(feature, dtype=np.int64)
        self.threshold_ = np.array(threshold, dtype=float)
        self.left_ = np.array(left, dtype=np.int64)
        self.right_ = np.array(right, dtype=np.int64)
        self.value_ = np.array(value, dtype=float)
        self.n_node_samples_ = np.array(nsamp, dtype=np.int64)
        self.depth_ = np.array(depth, dtype=np.int64)
        total = importances.sum()
        self.feature_importances_ = importances / total if total > 0 else importances
        return self

    def _best_split(self, X, y, w, idx, candidates):
        crit = self.criterion
        min_leaf = self.min_samples_leaf
        wy = w[idx] * y[idx]
        w0 = w[idx] - wy
        tot1, tot0 = wy.sum(), w0.sum()
        parent = float(_cost(tot0, tot1, crit))
        W = tot0 + tot1
        n = len(idx)
        best = None
        best_gain = -np.inf
        for f in candidates:
            vals = X[idx, f]
            order = np.argsort(vals, kind="stable")
            sv = vals[order]
            valid = sv[:-1] < sv[1:]
            if min_leaf > 1:
                pos = np.arange(1, n)
                valid &= (pos >= min_leaf) & (n - pos >= min_leaf)
            if not valid.any():
                continue
            l1 = np.cumsum(wy[order])[:-1]
            l0 = np.cumsum(w0[order])[:-1]
            child = _cost(l0, l1, crit) + _cost(tot0 - l0, tot1 - l1, crit)
            child = np.where(valid, child, np.inf)
            p = int(np.argmin(child))
            gain = (parent - child[p]) / W
            if gain > best_gain + _GAIN_TOL:
                thr = 0.5 * (sv[p] + sv[p + 1])
                if thr >= sv[p + 1]:
                    thr = sv[p]
                best_gain = gain
                best = (int(f), float(thr), float(max(gain, 0.0)) * W)
        if best is None or best_gain < -_GAIN_TOL:
            return None
        return best

    # -- inference -------------------------------------------------------
    def apply(self, X) -> np.ndarray:
        """Index of the leaf each row lands in."""
        X = np.asarray(X, dtype=float)
        node = np.zeros(X.shape[0], dtype=np.int64)
        if X.shape[0] == 0:
            return node
        while True:
            internal = self.left_[node] >= 0
            if not internal.any():
                return node
            rows = np.flatnonzero(internal)
            cur = node[rows]
            go_left = X[rows, self.feature_[cur]] <= self.threshold_[cur]
            node[rows] = np.where(go_left, self.left_[cur], self.right_[cur])

    def leaf_class(self) -> np.ndarray:
        """Majority class per node (ties go to class 0)."""
        return (self.value_[:, 1] > self.value_[:, 0]).astype(np.int64)

    def predict(self, X) -> np.ndarray:
        return self.leaf_class()[self.apply(X)]

    def predict_proba1(self, X) -> np.ndarray:
        v = self.value_[self.apply(X)]
        tot = v.sum(axis=1)
        return np.where(tot > 0, v[:, 1] / np.where(tot > 0, tot, 1), 0.0)

    def reachable_leaves(self) -> np.ndarray:
        out, stack = [], [0]
        while stack:
            node = stack.pop()
            if self.left_[node] < 0:
                out.append(node)
            else:
                stack.extend((self.right_[node], self.left_[node]))
        return np.array(sorted(out), dtype=np.int64)

    def max_leaf_depth(self) -> int:
        return int(self.depth_[self.reachable_leaves()].max())

    @property
    def n_leaves(self) -> int:
        return len(self.reachable_leaves())

    # -- pruning ---------------------------------------------------------
    def pruned(self, X_val, y_val) -> "DecisionTree":
        """Copy pruned by reduced-error pruning on a validation set.

        A subtree is replaced by a leaf whenever the leaf makes no more
        validation errors than the subtree. Nodes no validation row reaches
        therefore collapse.
        """
        X_val = np.asarray(X_val, dtype=float)
        y_val = np.asarray(y_val, dtype=np.int64)
        n_nodes = len(self.feature_)
        reach = np.zeros((n_nodes, 2))
        node = np.zeros(len(y_val), dtype=np.int64)
        active = np.ones(len(y_val), dtype=bool)
        while active.any():
            rows = np.flatnonzero(active)
            np.add.at(reach, (node[rows], y_val[rows]), 1.0)
            cur = node[rows]
            internal = self.left_[cur] >= 0
            active[rows[~internal]] = False
            rows, cur = rows[internal], cur[internal]
            go_left = X_val[rows, self.feature_[cur]] <= self.threshold_[cur]
            node[rows] = np.where(go_left, self.left_[cur], self.right_[cur])

        cls = self.leaf_class()
        leaf_err = np.where(cls == 1, reach[:, 0], reach[:, 1])
        sub_err = leaf_err.copy()
        out = self._copy()
        # children always carry larger indices than their parent
        for v in range(n_nodes - 1, -1, -1):
            if out.left_[v] < 0:
                continue
            sub = sub_err[out.left_[v]] + sub_err[out.right_[v]]
            if leaf_err[v] <= sub:
                out.left_[v] = out.right_[v] = -1
                out.feature_[v] = -1
                out.threshold_[v] = np.nan
                sub_err[v] = leaf_err[v]
            else:
                sub_err[v] = sub
        return out

    def _copy(self) -> "DecisionTree":
        out = DecisionTree(self.criterion, self.max_depth, self.min_samples_split, self.min_samples_leaf,
                           self.max_features, self.rule_list, self.random_state)
        for attr in ("feature_", "threshold_", "left_", "right_", "value_", "n_node_samples_", "depth_",
                     "feature_importances_"):
            setattr(out, attr, getattr(self, attr).copy())
        out.n_features_in_ = self.n_features_in_
        return out
