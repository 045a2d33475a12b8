"""Average-linkage (UPGMA) agglomerative clustering of a learner pool."""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Merge:
    left: int
    right: int
    height: float
    size: int


@dataclass(frozen=True)
class Dendrogram:
    """Merge tree over ``labels``; node ``p + i`` is created by ``merges[i]``."""

    labels: tuple[str, ...]
    merges: tuple[Merge, ...]

    def clusters(self, cut: float) -> list[list[str]]:
        """Groups left after discarding every merge higher than ``cut``."""
        p = len(self.labels)
        members = {i: [i] for i in range(p)}
        for k, mg in enumerate(self.merges):
            if mg.height <= cut:
                members[p + k] = members.pop(mg.left) + members.pop(mg.right)
            else:
                break
        groups = sorted(sorted(v) for v in members.values())
        return [[self.labels[i] for i in g] for g in groups]

    def _node(self, i: int) -> dict:
        p = len(self.labels)
        if i < p:
            return {"name": self.labels[i], "height": 0.0}
        mg = self.merges[i - p]
        return {"id": i, "height": mg.height, "size": mg.size,
                "children": [self._node(mg.left), self._node(mg.right)]}

    def to_dict(self) -> dict:
        root = len(self.labels) + len(self.merges) - 1
        return {"labels": list(self.labels), "tree": self._node(root),
                "merges": [[m.left, m.right, m.height, m.size] for m in self.merges]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_newick(self) -> str:
        p = len(self.labels)

        def height(i):
            return 0.0 if i < p else self.merges[i - p].height

        def render(i, parent_h):
            length = format(parent_h - height(i), ".6g")
            if i < p:
                name = self.labels[i]
                if any(ch in name for ch in " ,;:()[]'"):
                    name = "'" + name.replace("'", "''") + "'"
                return f"{name}:{length}"
            mg = self.merges[i - p]
            return f"({render(mg.left, mg.height)},{render(mg.right, mg.height)}):{length}"

        root = p + len(self.merges) - 1
        inner = render(root, height(root))
        return inner.rsplit(":", 1)[0] + ";"


def average_linkage(dist, labels=None) -> Dendrogram:
    """UPGMA on a symmetric distance matrix.

    Cluster distance is the mean of the original pairwise distances; among
    equally close pairs the one with the smallest ``(id_a, id_b)`` merges first.
    """
    D = np.asarray(dist, dtype=float)
    p = D.shape[0]
    if D.shape != (p, p) or p < 2:
        raise ValueError("need a square distance matrix over at least 2 items")
    if not np.allclose(D, D.T) or np.any(np.diag(D) != 0):
        raise ValueError("distance matrix must be symmetric with a zero diagonal")
    labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(p))
    active = {i: [i] for i in range(p)}
    merges = []
    next_id = p
    while len(active) > 1:
        ids = sorted(active)
        best = None
        for a_pos, a in enumerate(ids):
            for b in ids[a_pos + 1:]:
                d = float(D[np.ix_(active[a], active[b])].mean())
                if best is None or d < best[0]:
                    best = (d, a, b)
        d, a, b = best
        merged = active.pop(a) + active.pop(b)
        merges.append(Merge(a, b, d, len(merged)))
        active[next_id] = merged
        next_id += 1
    return Dendrogram(labels, tuple(merges))


def cluster_pool(cod, labels=None, linkage: str = "average", cut: float = 0.13):
    """Cluster learners by COD; returns ``(clusters, dendrogram)``."""
    if linkage != "average":
        raise ValueError("only average linkage is supported")
    if cut < 0:
        raise ValueError("cut must be >= 0")
    dendro = average_linkage(cod, labels)
    return dendro.clusters(cut), dendro
