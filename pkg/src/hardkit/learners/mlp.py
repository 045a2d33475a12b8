import numpy as np
from scipy.special import expit


class MLP:
    """One-hidden-layer ReLU network with a sigmoid output, trained by seeded mini-batch Adam."""

    def __init__(self, hidden=10, alpha=0.0041, learning_rate=0.01, epochs=200, batch_size=200,
                 random_state=0):
        self.hidden = int(hidden)
        self.alpha = alpha
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.batch_size = batch_size
        self.random_state = random_state

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        self.mean_ = X.mean(axis=0)
        std = X.std(axis=0)
        self.scale_ = np.where(std > 0, std, 1.0)
        Z = (X - self.mean_) / self.scale_
        n, m = Z.shape
        rng = np.random.default_rng(self.random_state)
        h = self.hidden
        b1_ = np.sqrt(6.0 / (m + h))
        b2_ = np.sqrt(6.0 / (h + 1))
        params = [rng.uniform(-b1_, b1_, (m, h)), rng.uniform(-b1_, b1_, h),
                  rng.uniform(-b2_, b2_, h), rng.uniform(-b2_, b2_)]
        params = [np.asarray(p, dtype=float) for p in params]
        mom = [np.zeros_like(p) for p in params]
        vel = [np.zeros_like(p) for p in params]
        beta1, beta2, eps = 0.9, 0.999, 1e-8
        bs = min(self.batch_size, n)
        t = 0
        for _ in range(self.epochs):
            order = rng.permutation(n)
            for s in range(0, n, bs):
                idx = order[s:s + bs]
                W1, c1, W2, c2 = params
                zb = Z[idx]
                a = zb @ W1 + c1
                hid = np.maximum(a, 0.0)
                out = expit(hid @ W2 + c2)
                d_out = (out - y[idx]) / len(idx)
                gW2 = hid.T @ d_out + self.alpha * W2 / len(idx)
                gc2 = d_out.sum()
                d_hid = np.outer(d_out, W2) * (a > 0)
                gW1 = zb.T @ d_hid + self.alpha * W1 / len(idx)
                gc1 = d_hid.sum(axis=0)
                t += 1
                for i, g in enumerate((gW1, gc1, gW2, gc2)):
                    mom[i] = beta1 * mom[i] + (1 - beta1) * g
                    vel[i] = beta2 * vel[i] + (1 - beta2) * g * g
                    mhat = mom[i] / (1 - beta1 ** t)
                    vhat = vel[i] / (1 - beta2 ** t)
                    params[i] = params[i] - self.learning_rate * mhat / (np.sqrt(vhat) + eps)
        self.params_ = params
        return self

    def predict_proba1(self, X):
        W1, c1, W2, c2 = self.params_
        Z = (np.asarray(X, dtype=float) - self.mean_) / self.scale_
        return expit(np.maximum(Z @ W1 + c1, 0.0) @ W2 + c2)

    def predict(self, X):
        return (self.predict_proba1(X) > 0.5).astype(np.int64)
