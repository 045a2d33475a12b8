import numpy as np
from scipy.spatial.distance import cdist


def neighbor_order(D: np.ndarray) -> np.ndarray:
    """Column order of each row of ``D`` by distance, ties to the lower index."""
    return np.argsort(D, axis=1, kind="stable")


class KNN:
    """Uniform-vote k-nearest-neighbour classifier (Euclidean).

    Distance ties go to the lower training index. With an even ``k`` a tied
    vote is settled by the single nearest neighbour.
    """

    def __init__(self, k=5, chunk=2048):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.k = int(k)
        self.chunk = chunk

    def fit(self, X, y):
        self.X_ = np.asarray(X, dtype=float)
        self.y_ = np.asarray(y, dtype=np.int64)
        return self

    def predict(self, X):
        X = np.asarray(X, dtype=float)
        k = min(self.k, len(self.y_))
        out = np.empty(len(X), dtype=np.int64)
        for s in range(0, len(X), self.chunk):
            D = cdist(X[s:s + self.chunk], self.X_)
            nn = neighbor_order(D)[:, :k]
            votes = self.y_[nn].mean(axis=1)
            pred = (votes > 0.5).astype(np.int64)
            tie = votes == 0.5
            pred[tie] = self.y_[nn[tie, 0]]
            out[s:s + self.chunk] = pred
        return out
