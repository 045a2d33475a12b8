"""Small synthetic datasets used by the tests, the examples and the bundled fixture."""
from __future__ import annotations

from importlib import resources

import numpy as np

from .data import Dataset, load_dataset


def gaussian_blobs(n: int = 40, separation: float = 10.0, m: int = 2, pos_frac: float = 0.5,
                   seed: int = 0, name: str = "blobs") -> Dataset:
    """Two unit-variance Gaussian clouds whose means differ by ``separation`` along the diagonal."""
    rng = np.random.default_rng(seed)
    n1 = int(round(n * pos_frac))
    n0 = n - n1
    shift = separation / np.sqrt(m)
    X = np.vstack([rng.normal(0.0, 1.0, (n0, m)), rng.normal(shift, 1.0, (n1, m))])
    y = np.r_[np.zeros(n0), np.ones(n1)].astype(np.int64)
    return Dataset(X, y, name=name)


def xor_points() -> Dataset:
    """The four corners of the unit square labelled as a checkerboard."""
    X = np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]])
    return Dataset(X, np.array([0, 0, 1, 1]), name="xor")


def overlap_imbalanced(n: int = 500, pos_frac: float = 0.2, m: int = 4, shift: float = 1.0,
                       seed: int = 7) -> Dataset:
    """Imbalanced data with a partly overlapping minority.

    The majority is standard normal in ``m`` dimensions; the minority is a
    normal cloud shifted by ``shift`` on the first two features, so part of
    it sits inside the majority and part of it is cleanly separable.
    """
    rng = np.random.default_rng(seed)
    n1 = int(round(n * pos_frac))
    n0 = n - n1
    X0 = rng.normal(0.0, 1.0, (n0, m))
    X1 = rng.normal(0.0, 1.0, (n1, m))
    X1[:, : min(2, m)] += shift
    X = np.vstack([X0, X1])
    y = np.r_[np.zeros(n0), np.ones(n1)].astype(np.int64)
    return Dataset(X, y, tuple(f"x{j}" for j in range(m)), name="overlap_imbalanced")


def two_moons(n: int = 300, label_noise: float = 0.1, jitter: float = 0.15, seed: int = 0) -> Dataset:
    """Interleaving half circles with Gaussian jitter; ``label_noise`` of the labels are flipped."""
    rng = np.random.default_rng(seed)
    n0 = n // 2
    n1 = n - n0
    t0 = rng.uniform(0, np.pi, n0)
    t1 = rng.uniform(0, np.pi, n1)
    X0 = np.column_stack([np.cos(t0), np.sin(t0)])
    X1 = np.column_stack([1.0 - np.cos(t1), 0.5 - np.sin(t1)])
    X = np.vstack([X0, X1]) + rng.normal(0.0, jitter, (n, 2))
    y = np.r_[np.zeros(n0), np.ones(n1)].astype(np.int64)
    flip = rng.choice(n, size=int(round(label_noise * n)), replace=False)
    y[flip] = 1 - y[flip]
    return Dataset(X, y, ("x", "y"), name="two_moons")


def bundled(name: str = "overlap_imbalanced") -> Dataset:
    """Load a CSV shipped inside the package (``hardkit/fixtures/<name>.csv``)."""
    ref = resources.files("hardkit").joinpath("fixtures").joinpath(f"{name}.csv")
    with resources.as_file(ref) as path:
        return load_dataset(path, label_column="label", positive_label="1")
