"""Neighbourhood structures shared by instance- and dataset-level measures."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..data import Dataset, DatasetError, distance_matrix


def prim_mst(D: np.ndarray) -> np.ndarray:
    """Minimum spanning tree of a complete graph given as a distance matrix.

    Returns an (n-1) x 2 array of ``(i, j)`` edges with ``i < j`` in the order
    Prim's algorithm (started at vertex 0) adds them. Equal-weight candidates
    are resolved toward the smallest ``(i, j)`` pair.
    """
    n = D.shape[0]
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    best = D[0].astype(float).copy()
    parent = np.zeros(n, dtype=np.int64)
    edges = np.empty((max(n - 1, 0), 2), dtype=np.int64)
    for e in range(n - 1):
        cand = np.where(in_tree, np.inf, best)
        low = cand.min()
        vs = np.flatnonzero(cand == low)
        if len(vs) > 1:
            keys = [(min(parent[v], v), max(parent[v], v)) for v in vs]
            v = int(vs[min(range(len(vs)), key=keys.__getitem__)])
        else:
            v = int(vs[0])
        edges[e] = (min(parent[v], v), max(parent[v], v))
        in_tree[v] = True
        row = D[v]
        upd = ~in_tree & ((row < best) | ((row == best) & (v < parent)))
        best[upd] = row[upd]
        parent[upd] = v
    return edges


@dataclass(frozen=True, eq=False)
class MeasureContext:
    """Distances, k nearest neighbours, nearest enemies, local sets and MST of one dataset.

    ``knn[i]`` lists the ``k`` nearest other instances of ``i`` (ties to the
    lower index). ``enemy[i]`` is the nearest instance of the other class and
    ``friend[i]`` the nearest other instance of the same class (-1 if none).
    ``local_set[i, j]`` is true when ``j != i`` lies strictly closer to ``i``
    than ``enemy[i]`` does; ``i`` itself is always part of its own local set
    but is kept off this matrix.
    """

    X: np.ndarray
    y: np.ndarray
    D: np.ndarray
    k: int
    knn: np.ndarray
    enemy: np.ndarray
    enemy_dist: np.ndarray
    friend: np.ndarray
    friend_dist: np.ndarray
    local_set: np.ndarray
    mst: np.ndarray

    @classmethod
    def build(cls, dataset: Dataset, k: int = 5) -> "MeasureContext":
        n = dataset.n
        if k < 1:
            raise ValueError("k must be >= 1")
        if n <= k:
            raise DatasetError(f"need more than k={k} instances, got {n}")
        dataset.require_both_classes("neighbourhood measures")
        X, y = dataset.X, dataset.y
        D = distance_matrix(X)
        Dself = D.copy()
        np.fill_diagonal(Dself, np.inf)
        knn = np.argsort(Dself, axis=1, kind="stable")[:, :k]

        same = y[:, None] == y[None, :]
        Denemy = np.where(same, np.inf, D)
        enemy = np.argmin(Denemy, axis=1)
        enemy_dist = Denemy[np.arange(n), enemy]
        Dfriend = np.where(same, Dself, np.inf)
        friend = np.argmin(Dfriend, axis=1)
        friend_dist = Dfriend[np.arange(n), friend]
        friend = np.where(np.isfinite(friend_dist), friend, -1)

        local_set = D < enemy_dist[:, None]
        np.fill_diagonal(local_set, False)
        return cls(X, y, D, k, knn, enemy, enemy_dist, friend, friend_dist, local_set, prim_mst(D))

    @property
    def n(self) -> int:
        return len(self.y)

    def class_sizes(self) -> np.ndarray:
        """Size of each instance's own class."""
        counts = np.bincount(self.y, minlength=2)
        return counts[self.y]

    def mst_neighbors(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n)]
        for i, j in self.mst:
            adj[i].append(int(j))
            adj[j].append(int(i))
        return adj
