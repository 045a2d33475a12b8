"""Learner specifications, fitted models and the default classifier pool."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .._specstr import parse_spec_string
from ..data import Dataset, DatasetError
from .bayes import GaussianNB
from .ensemble import AdaBoostStumps, RandomForest
from .linear import LinearSVM, LogisticRegression
from .mlp import MLP
from .neighbors import KNN
from .tree import DecisionTree


class LearnerError(ValueError):
    pass


def _positive_int(v):
    return isinstance(v, (int, np.integer)) and not isinstance(v, bool) and v >= 1


def _depth(v):
    return v is None or _positive_int(v)


def _positive(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool) and v > 0


def _unit(v):
    return isinstance(v, (int, float)) and 0 <= v <= 1


def _criterion(v):
    return v in ("gini", "entropy")


def _max_features(v):
    return v is None or v in ("sqrt", "log2") or _positive_int(v) or (isinstance(v, float) and 0 < v <= 1)


# algorithm -> {hyperparameter: (default, validator)}
HYPERPARAMETERS = {
    "knn": {"k": (5, _positive_int)},
    "gaussian_nb": {"var_smoothing": (1e-9, _positive)},
    "cart": {"criterion": ("gini", _criterion), "max_depth": (None, _depth),
             "min_samples_split": (2, _positive_int), "min_samples_leaf": (1, _positive_int),
             "max_features": (None, _max_features)},
    "logistic": {"C": (1.0, _positive), "l1_ratio": (0.5, _unit), "epochs": (200, _positive_int)},
    "linear_svm": {"C": (90.0, _positive), "epochs": (200, _positive_int)},
    "mlp": {"hidden": (10, _positive_int), "alpha": (0.0041, _positive), "learning_rate": (0.01, _positive),
            "epochs": (200, _positive_int), "batch_size": (200, _positive_int)},
    "random_forest": {"n_estimators": (50, _positive_int), "criterion": ("gini", _criterion),
                      "max_features": ("sqrt", _max_features), "min_samples_split": (2, _positive_int),
                      "min_samples_leaf": (1, _positive_int), "max_depth": (None, _depth),
                      "bootstrap": (True, lambda v: isinstance(v, bool))},
    "adaboost_stumps": {"n_estimators": (50, _positive_int), "criterion": ("gini", _criterion)},
    "greedy_rule_list": {"max_depth": (5, _positive_int), "criterion": ("gini", _criterion)},
}

ALGORITHMS = tuple(HYPERPARAMETERS)


@dataclass(frozen=True)
class LearnerSpec:
    """Algorithm name, hyperparameter overrides and seed for one pool member."""

    algorithm: str
    hyperparameters: dict = field(default_factory=dict, hash=False)
    seed: int = 0
    name: str | None = None

    def __post_init__(self):
        if self.algorithm not in HYPERPARAMETERS:
            raise LearnerError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")
        known = HYPERPARAMETERS[self.algorithm]
        for key, value in self.hyperparameters.items():
            if key not in known:
                raise LearnerError(f"{self.algorithm}: unknown hyperparameter {key!r}")
            if not known[key][1](value):
                raise LearnerError(f"{self.algorithm}: invalid value {value!r} for {key}")
        object.__setattr__(self, "hyperparameters", dict(self.hyperparameters))

    @property
    def label(self) -> str:
        return self.name or self.algorithm

    def params(self) -> dict:
        out = {k: d for k, (d, _) in HYPERPARAMETERS[self.algorithm].items()}
        out.update(self.hyperparameters)
        return out

    def with_seed(self, seed: int) -> "LearnerSpec":
        return LearnerSpec(self.algorithm, self.hyperparameters, int(seed), self.name)

    def to_dict(self) -> dict:
        return {"algorithm": self.algorithm, "hyperparameters": dict(self.hyperparameters),
                "seed": self.seed, "name": self.name}

    def build(self):
        p = self.params()
        a = self.algorithm
        if a == "knn":
            return KNN(p["k"])
        if a == "gaussian_nb":
            return GaussianNB(p["var_smoothing"])
        if a == "cart":
            return DecisionTree(p["criterion"], p["max_depth"], p["min_samples_split"], p["min_samples_leaf"],
                                p["max_features"], random_state=self.seed)
        if a == "logistic":
            return LogisticRegression(p["C"], p["l1_ratio"], p["epochs"])
        if a == "linear_svm":
            return LinearSVM(p["C"], p["epochs"])
        if a == "mlp":
            return MLP(p["hidden"], p["alpha"], p["learning_rate"], p["epochs"], p["batch_size"], self.seed)
        if a == "random_forest":
            return RandomForest(p["n_estimators"], p["criterion"], p["max_features"], p["min_samples_split"],
                                p["min_samples_leaf"], p["max_depth"], p["bootstrap"], self.seed)
        if a == "adaboost_stumps":
            return AdaBoostStumps(p["n_estimators"], p["criterion"])
        return DecisionTree(p["criterion"], p["max_depth"], rule_list=True, random_state=self.seed)


@dataclass(frozen=True, eq=False)
class Model:
    spec: LearnerSpec
    estimator: object
    n_features: int
    fingerprint: str = ""


def fit(spec: LearnerSpec, train: Dataset, fingerprint: str = "") -> Model:
    """Train ``spec`` on ``train``; both classes must be present."""
    try:
        train.require_both_classes(f"fitting {spec.label}")
    except DatasetError as exc:
        raise LearnerError(str(exc)) from None
    est = spec.build()
    est.fit(train.X, train.y)
    return Model(spec, est, train.m, fingerprint or train.name)


def predict(model: Model, rows) -> np.ndarray:
    rows = np.asarray(rows, dtype=float)
    if rows.size == 0:
        return np.zeros(0, dtype=np.int64)
    if rows.ndim != 2 or rows.shape[1] != model.n_features:
        raise LearnerError(f"expected rows with {model.n_features} features, got shape {rows.shape}")
    return np.asarray(model.estimator.predict(rows), dtype=np.int64)


# Log-scale midpoints of the usual tuning ranges where the learner exposes the knob.
DEFAULT_POOL = (
    LearnerSpec("knn", {"k": 5}),
    LearnerSpec("gaussian_nb", {"var_smoothing": 1e-9}),
    LearnerSpec("cart", {"min_samples_split": 3, "min_samples_leaf": 3}),
    LearnerSpec("logistic", {"C": 1.0, "l1_ratio": 0.5}),
    LearnerSpec("linear_svm", {"C": 90.0}),
    LearnerSpec("mlp", {"hidden": 10}),
    LearnerSpec("random_forest", {"n_estimators": 50, "min_samples_split": 3}),
    LearnerSpec("adaboost_stumps", {"n_estimators": 50}),
    LearnerSpec("greedy_rule_list", {"max_depth": 5}),
)


def default_pool() -> list[LearnerSpec]:
    return list(DEFAULT_POOL)


def parse_learner(text: str) -> LearnerSpec:
    """``"knn:k=3"`` or ``"cart"``; an optional ``seed`` and ``name`` key are lifted out."""
    algo, params = parse_spec_string(text)
    seed = params.pop("seed", 0)
    name = params.pop("name", None)
    return LearnerSpec(algo, params, int(seed), name)


def load_pool(source) -> list[LearnerSpec]:
    """Read a pool from a JSON list of spec objects or a text file with one spec string per line.

    ``source`` may also be an inline comma-free list like ``"knn;cart;mlp"``.
    """
    path = Path(str(source))
    text = path.read_text(encoding="utf-8") if path.is_file() else str(source)
    stripped = text.strip()
    if stripped.startswith("["):
        pool = []
        for item in json.loads(stripped):
            if isinstance(item, str):
                pool.append(parse_learner(item))
            else:
                pool.append(LearnerSpec(item["algorithm"], item.get("hyperparameters", {}),
                                        int(item.get("seed", 0)), item.get("name")))
    else:
        lines = [ln.strip() for ln in stripped.replace(";", "\n").splitlines()]
        pool = [parse_learner(ln) for ln in lines if ln and not ln.startswith("#")]
    if not pool:
        raise LearnerError("empty pool")
    return pool
