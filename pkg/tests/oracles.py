"""Slow, loop-based reference implementations used as test oracles.

Nothing here imports from hardkit; everything works on plain lists so the
arithmetic path is independent of the vectorized code under test.
"""
from __future__ import annotations

import math

import networkx as nx


def dist(a, b):
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))


def distances(X):
    n = len(X)
    return [[dist(X[i], X[j]) for j in range(n)] for i in range(n)]


def knn_list(D, i, k):
    """k nearest others of i, ties to the lower index."""
    others = sorted((D[i][j], j) for j in range(len(D)) if j != i)
    return [j for _, j in others[:k]]


def nearest_enemy(D, y, i):
    best = None
    for j in range(len(y)):
        if y[j] != y[i] and (best is None or D[i][j] < D[i][best]):
            best = j
    return best


def nearest_friend(D, y, i):
    best = None
    for j in range(len(y)):
        if j != i and y[j] == y[i] and (best is None or D[i][j] < D[i][best]):
            best = j
    return best


def local_set(D, y, i):
    """Others strictly closer to i than its nearest enemy."""
    ne = nearest_enemy(D, y, i)
    return [j for j in range(len(y)) if j != i and D[i][j] < D[i][ne]]


def kdn(X, y, k=5):
    D = distances(X)
    out = []
    for i in range(len(y)):
        nb = knn_list(D, i, k)
        out.append(sum(1 for j in nb if y[j] != y[i]) / k)
    return out


def mst_edges(D):
    g = nx.Graph()
    n = len(D)
    for i in range(n):
        for j in range(i + 1, n):
            g.add_edge(i, j, weight=D[i][j])
    return sorted(tuple(sorted(e)) for e in nx.minimum_spanning_edges(g, algorithm="kruskal", data=False))


def n1_instance(X, y):
    D = distances(X)
    adj = {i: [] for i in range(len(y))}
    for a, b in mst_edges(D):
        adj[a].append(b)
        adj[b].append(a)
    return [sum(1 for j in adj[i] if y[j] != y[i]) / len(adj[i]) for i in range(len(y))]


def n2_instance(X, y):
    D = distances(X)
    out = []
    for i in range(len(y)):
        f = nearest_friend(D, y, i)
        e = nearest_enemy(D, y, i)
        if f is None:
            out.append(1.0)
            continue
        if D[i][e] == 0:
            out.append(0.5 if D[i][f] == 0 else 1.0)
            continue
        r = D[i][f] / D[i][e]
        out.append(r / (1 + r))
    return out


def lsc_instance(X, y):
    D = distances(X)
    out = []
    for i in range(len(y)):
        peers = sum(1 for j in range(len(y)) if y[j] == y[i]) - 1
        out.append(1.0 if peers == 0 else 1 - len(local_set(D, y, i)) / peers)
    return out


def usefulness(X, y):
    D = distances(X)
    sets = [set(local_set(D, y, i)) for i in range(len(y))]
    out = []
    for i in range(len(y)):
        peers = sum(1 for j in range(len(y)) if y[j] == y[i]) - 1
        holders = sum(1 for z in range(len(y)) if z != i and i in sets[z])
        out.append(1.0 if peers == 0 else 1 - holders / peers)
    return out


def harmfulness(X, y):
    D = distances(X)
    ne = [nearest_enemy(D, y, i) for i in range(len(y))]
    out = []
    for i in range(len(y)):
        opp = sum(1 for j in range(len(y)) if y[j] != y[i])
        out.append(sum(1 for z in range(len(y)) if ne[z] == i) / opp)
    return out


def n1_dataset(X, y):
    D = distances(X)
    border = set()
    for a, b in mst_edges(D):
        if y[a] != y[b]:
            border.update((a, b))
    return len(border) / len(y)


def n3_dataset(X, y):
    D = distances(X)
    wrong = 0
    for i in range(len(y)):
        j = knn_list(D, i, 1)[0]
        wrong += y[j] != y[i]
    return wrong / len(y)


def lsc_dataset(X, y):
    """LS(x) taken as a set of points of the dataset, so x itself (distance 0) belongs to it."""
    D = distances(X)
    n = len(y)
    total = 0
    for i in range(n):
        ne = nearest_enemy(D, y, i)
        total += sum(1 for j in range(n) if D[i][j] < D[i][ne])
    return 1 - total / (n * n)


def fisher_r(col, y):
    n = len(col)
    mu = sum(col) / n
    num = den = 0.0
    for c in (0, 1):
        xs = [v for v, t in zip(col, y) if t == c]
        mc = sum(xs) / len(xs)
        num += len(xs) * (mc - mu) ** 2
        den += sum((v - mc) ** 2 for v in xs)
    if num == 0:
        return 0.0
    if den == 0:
        return math.inf
    return num / den


def f1(X, y):
    r = max(fisher_r([row[f] for row in X], y) for f in range(len(X[0])))
    return 0.0 if math.isinf(r) else 1 / (1 + r)


def n2_dataset(X, y):
    D = distances(X)
    intra = extra = 0.0
    for i in range(len(y)):
        f = nearest_friend(D, y, i)
        intra += 0.0 if f is None else D[i][f]
        extra += D[i][nearest_enemy(D, y, i)]
    if extra == 0:
        return 0.5 if intra == 0 else 1.0
    s = intra / extra
    return s / (1 + s)


def anova_f(col, y):
    n = len(col)
    mu = sum(col) / n
    ssb = ssw = 0.0
    for c in (0, 1):
        xs = [v for v, t in zip(col, y) if t == c]
        mc = sum(xs) / len(xs)
        ssb += len(xs) * (mc - mu) ** 2
        ssw += sum((v - mc) ** 2 for v in xs)
    if ssb == 0:
        return 0.0
    if ssw == 0:
        return math.inf
    return ssb / (ssw / (n - 2))


def mcc_counts(tp, tn, fp, fn):
    den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)
    return 0.0 if den == 0 else (tp * tn - fp * fn) / math.sqrt(den)


def spearman_no_ties(x, y):
    """Rank-difference formula, valid only without ties."""
    n = len(x)
    rx = {i: r for r, i in enumerate(sorted(range(n), key=lambda i: x[i]), 1)}
    ry = {i: r for r, i in enumerate(sorted(range(n), key=lambda i: y[i]), 1)}
    d2 = sum((rx[i] - ry[i]) ** 2 for i in range(n))
    return 1 - 6 * d2 / (n * (n * n - 1))


def epsilon_graph_edges(X, y, fraction=0.15):
    D = distances(X)
    eps = fraction * max(max(row) for row in D)
    n = len(y)
    return sorted((i, j) for i in range(n) for j in range(i + 1, n) if D[i][j] < eps and y[i] == y[j])
