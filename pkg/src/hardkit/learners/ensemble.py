import numpy as np

from .tree import DecisionTree


class RandomForest:
    """Bagged CART trees with per-node feature subsampling; majority vote, ties to class 0."""

    def __init__(self, n_estimators=50, criterion="gini", max_features="sqrt", min_samples_split=2,
                 min_samples_leaf=1, max_depth=None, bootstrap=True, random_state=0):
        self.n_estimators = int(n_estimators)
        self.criterion = criterion
        self.max_features = max_features
        self.min_samples_split = min_samples_split
        self.min_samples_leaf = min_samples_leaf
        self.max_depth = max_depth
        self.bootstrap = bootstrap
        self.random_state = random_state

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=np.int64)
        n = len(y)
        rng = np.random.default_rng(self.random_state)
        self.trees_ = []
        for t in range(self.n_estimators):
            # a single unbootstrapped tree reuses the forest seed, making it identical to plain CART
            tree_seed = self.random_state if (self.n_estimators == 1 and not self.bootstrap) \
                else int(rng.integers(2**63))
            idx = rng.integers(0, n, n) if self.bootstrap else np.arange(n)
            tree = DecisionTree(self.criterion, self.max_depth, self.min_samples_split, self.min_samples_leaf,
                                self.max_features, random_state=tree_seed)
            if self.bootstrap and np.unique(y[idx]).size < 2:
                # keep both classes represented so the tree can still split
                idx = np.concatenate([idx, [int(np.flatnonzero(y != y[idx[0]])[0])]])
            self.trees_.append(tree.fit(X[idx], y[idx]))
        self.feature_importances_ = np.mean([t.feature_importances_ for t in self.trees_], axis=0)
        return self

    def vote_fraction(self, X):
        return np.mean([t.predict(X) for t in self.trees_], axis=0)

    def predict(self, X):
        return (self.vote_fraction(X) > 0.5).astype(np.int64)


class AdaBoostStumps:
    """Discrete AdaBoost over depth-1 CART stumps.

    Stops early when a stump is perfect on the weighted training set (it is
    then given a large fixed weight) or no better than chance.
    """

    PERFECT_ALPHA = 10.0

    def __init__(self, n_estimators=50, criterion="gini"):
        self.n_estimators = int(n_estimators)
        self.criterion = criterion

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=np.int64)
        n = len(y)
        w = np.full(n, 1.0 / n)
        self.stumps_, self.alphas_ = [], []
        for _ in range(self.n_estimators):
            stump = DecisionTree(self.criterion, max_depth=1).fit(X, y, sample_weight=w)
            miss = stump.predict(X) != y
            err = float(w[miss].sum() / w.sum())
            if err <= 0.0:
                self.stumps_.append(stump)
                self.alphas_.append(self.PERFECT_ALPHA)
                break
            if err >= 0.5:
                if not self.stumps_:
                    self.stumps_.append(stump)
                    self.alphas_.append(1.0)
                break
            alpha = 0.5 * np.log((1.0 - err) / err)
            self.stumps_.append(stump)
            self.alphas_.append(alpha)
            w = w * np.exp(np.where(miss, alpha, -alpha))
            w /= w.sum()
        return self

    def staged_scores(self, X):
        score = np.zeros(len(X))
        for stump, alpha in zip(self.stumps_, self.alphas_):
            score = score + alpha * (2.0 * stump.predict(X) - 1.0)
            yield score

    def predict(self, X):
        score = np.zeros(len(X))
        for score in self.staged_scores(X):
            pass
        return (score > 0).astype(np.int64)
