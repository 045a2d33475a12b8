"""Linear classifiers trained by deterministic full-batch gradient descent.

Both models standardize their inputs internally, so step sizes do not
depend on feature scale. Steps use the constant ``1 / L`` rule, with ``L``
the Lipschitz constant of the smooth part of the objective.
"""
import numpy as np
from scipy.special import expit


class _Standardizer:
    def __init__(self, X):
        self.mean = X.mean(axis=0)
        std = X.std(axis=0)
        self.scale = np.where(std > 0, std, 1.0)

    def __call__(self, X):
        return (np.asarray(X, dtype=float) - self.mean) / self.scale


def _gram_bound(Z):
    """Largest eigenvalue of the augmented Gram matrix ``[Z 1]^T [Z 1] / n``."""
    A = np.hstack([Z, np.ones((len(Z), 1))])
    return float(np.linalg.eigvalsh(A.T @ A / len(Z))[-1])


class _LinearBase:
    def decision_function(self, X):
        return self._std(X) @ self.coef_ + self.intercept_

    def predict(self, X):
        return (self.decision_function(X) > 0).astype(np.int64)

    def raw_hyperplane(self):
        """``(w, b)`` of the decision boundary in the original feature space."""
        w = self.coef_ / self._std.scale
        return w, float(self.intercept_ - np.dot(w, self._std.mean))


class LogisticRegression(_LinearBase):
    """Elastic-net logistic regression (proximal gradient for the L1 part).

    Objective: mean log-loss + (1 / (C n)) * ((1 - l1_ratio) / 2 * |w|^2 + l1_ratio * |w|_1).
    """

    def __init__(self, C=1.0, l1_ratio=0.5, epochs=200):
        if C <= 0:
            raise ValueError("C must be positive")
        self.C, self.l1_ratio, self.epochs = C, l1_ratio, epochs

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        self._std = _Standardizer(X)
        Z = self._std(X)
        n, m = Z.shape
        reg = 1.0 / (self.C * n)
        l2, l1 = reg * (1 - self.l1_ratio), reg * self.l1_ratio
        step = 1.0 / (0.25 * _gram_bound(Z) + l2)
        w, b = np.zeros(m), 0.0
        for _ in range(self.epochs):
            r = expit(Z @ w + b) - y
            w = w - step * (Z.T @ r / n + l2 * w)
            w = np.sign(w) * np.maximum(np.abs(w) - step * l1, 0.0)
            b -= step * r.mean()
        self.coef_, self.intercept_ = w, b
        return self


class LinearSVM(_LinearBase):
    """Linear SVM on the squared hinge loss.

    Objective: mean squared hinge + (1 / (C n)) / 2 * |w|^2, labels mapped to +-1.
    """

    def __init__(self, C=90.0, epochs=200):
        if C <= 0:
            raise ValueError("C must be positive")
        self.C, self.epochs = C, epochs

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        s = 2.0 * np.asarray(y, dtype=float) - 1.0
        self._std = _Standardizer(X)
        Z = self._std(X)
        n, m = Z.shape
        lam = 1.0 / (self.C * n)
        step = 1.0 / (2.0 * _gram_bound(Z) + lam)
        w, b = np.zeros(m), 0.0
        for _ in range(self.epochs):
            slack = np.maximum(1.0 - s * (Z @ w + b), 0.0)
            g = -2.0 * s * slack / n
            w = w - step * (Z.T @ g + lam * w)
            b -= step * g.sum()
        self.coef_, self.intercept_ = w, b
        return self
