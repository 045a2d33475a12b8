"""Instance hardness from the misclassification frequency of a cross-validated pool."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from ..data import Dataset, EvaluationPlan, NormalizationSpec, fit_normalizer, stratified_folds
from ..learners.base import LearnerError, default_pool, fit, predict
from ..learners.metrics import mcc
from ..preprocess import FeatureSelectSpec, ResampleSpec, resample, select_features
from .measures import instance_measures

SCHEMA_VERSION = 1


def derive_seed(*parts: int) -> int:
    """Stable 32-bit seed from integer parts."""
    return int(np.random.SeedSequence([int(p) for p in parts]).generate_state(1)[0])


@dataclass(frozen=True)
class BaselinePipeline:
    """Per-fold preprocessing: normalization, feature selection, then resampling of the training fold.

    ``selector`` and ``resampler`` accept spec strings such as ``"skb_anova:k=3"``;
    ``"none"`` disables a step.
    """

    normalization: str = "standard"
    selector: str = "cfs"
    resampler: str = "smote"

    def fit(self, train: Dataset, seed: int = 0) -> "FittedPipeline":
        norm = fit_normalizer(train, self.normalization)
        data = train.with_features(norm.transform(train.X))
        fs = FeatureSelectSpec.parse(self.selector, seed=seed)
        data, kept = select_features(data, fs)
        if self.resampler != "none":
            data = resample(data, ResampleSpec.parse(self.resampler, seed=seed))
        return FittedPipeline(norm, kept, data)


@dataclass(frozen=True, eq=False)
class FittedPipeline:
    normalizer: NormalizationSpec
    kept: np.ndarray
    train: Dataset

    def transform(self, X) -> np.ndarray:
        return self.normalizer.transform(X)[:, self.kept]


@dataclass(frozen=True, eq=False)
class PoolPredictions:
    """Test-time predictions ``preds[r, j, i]`` of learner ``j`` for instance ``i`` in repeat ``r``.

    ``valid[r, j, i]`` is False where the learner failed to train on the fold
    holding ``i``; ``failures`` lists ``(repeat, fold, learner label, message)``.
    """

    y: np.ndarray
    learners: tuple[str, ...]
    preds: np.ndarray
    valid: np.ndarray
    failures: tuple = ()

    @property
    def wrong(self) -> np.ndarray:
        return (self.preds != self.y[None, None, :]) & self.valid


def learner_labels(pool) -> tuple[str, ...]:
    """Display labels, made unique with a ``#j`` suffix where needed."""
    raw = [s.label for s in pool]
    return tuple(lbl if raw.count(lbl) == 1 else f"{lbl}#{j}" for j, lbl in enumerate(raw))


def run_pool(dataset: Dataset, pool=None, plan: EvaluationPlan | None = None,
             pipeline: BaselinePipeline | None = None) -> PoolPredictions:
    """Fit every learner on every training fold and record its test-fold predictions.

    Training rows are presented in canonical (content-sorted) order and every
    seed is derived from ``(plan.seed, repeat, fold[, learner])``, so the
    result does not depend on the row order of ``dataset``.
    """
    pool = list(pool) if pool is not None else default_pool()
    if not pool:
        raise LearnerError("empty pool")
    plan = plan or stratified_folds(dataset)
    if plan.n != dataset.n:
        raise ValueError(f"plan covers {plan.n} instances, dataset has {dataset.n}")
    pipeline = pipeline or BaselinePipeline()
    rank = np.empty(dataset.n, dtype=np.int64)
    rank[dataset.canonical_order()] = np.arange(dataset.n)
    labels = learner_labels(pool)

    preds = np.zeros((plan.repeats, len(pool), dataset.n), dtype=np.int64)
    valid = np.zeros_like(preds, dtype=bool)
    failures = []
    for r, f, train_idx, test_idx in plan.splits():
        train_idx = train_idx[np.argsort(rank[train_idx], kind="stable")]
        fitted = pipeline.fit(dataset.subset(train_idx), seed=derive_seed(plan.seed, r, f))
        rows = fitted.transform(dataset.X[test_idx])
        ok = 0
        for j, spec in enumerate(pool):
            try:
                model = fit(spec.with_seed(derive_seed(plan.seed, r, f, j)), fitted.train)
            except (LearnerError, ValueError, FloatingPointError) as exc:
                failures.append((r, f, labels[j], str(exc)))
                continue
            preds[r, j, test_idx] = predict(model, rows)
            valid[r, j, test_idx] = True
            ok += 1
        if ok == 0:
            raise LearnerError(f"every learner failed on repeat {r}, fold {f}: {failures[-1][3]}")
    return PoolPredictions(dataset.y.copy(), labels, preds, valid, tuple(failures))


@dataclass(frozen=True, eq=False)
class HardnessReport:
    """Per-instance hardness, optional instance measures and per-learner breakdown."""

    y: np.ndarray
    ih: np.ndarray
    learner_ih: dict = field(default_factory=dict)
    measures: dict = field(default_factory=dict)
    predictions: PoolPredictions | None = None
    name: str = ""

    @property
    def n(self) -> int:
        return len(self.ih)

    def dsh(self) -> float:
        return dsh(self)

    def idsh(self) -> float:
        if self.predictions is None:
            raise ValueError("report carries no pool predictions")
        return idsh_from_predictions(self.predictions)

    def permuted(self, order) -> "HardnessReport":
        """Report re-indexed so that entry ``i`` describes former entry ``order[i]``."""
        order = np.asarray(order)
        return HardnessReport(self.y[order], self.ih[order], {k: v[order] for k, v in self.learner_ih.items()},
                              {k: v[order] for k, v in self.measures.items()}, None, self.name)

    def columns(self) -> dict[str, np.ndarray]:
        cols = {"index": np.arange(self.n), "label": self.y, "ih": self.ih}
        cols.update(self.measures)
        cols.update({f"ih_{k}": v for k, v in self.learner_ih.items()})
        return cols

    def to_csv(self) -> str:
        cols = self.columns()
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for i in range(self.n):
            w.writerow([_fmt(v[i]) for v in cols.values()])
        return buf.getvalue()

    def to_dict(self) -> dict:
        out = {"schema_version": SCHEMA_VERSION, "name": self.name, "n": self.n, "dsh": self.dsh()}
        if self.predictions is not None:
            out["idsh"] = self.idsh()
            out["learners"] = list(self.predictions.learners)
            out["failures"] = [list(f) for f in self.predictions.failures]
        out["instances"] = {k: [_fmt(x) for x in v] for k, v in self.columns().items()}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _fmt(v):
    if isinstance(v, (np.integer, int)):
        return int(v)
    return float(v)


def estimate_ih(dataset: Dataset, pool=None, plan: EvaluationPlan | None = None,
                pipeline: BaselinePipeline | None = None, with_measures: bool = False, k: int = 5,
                measure_seed: int = 0) -> HardnessReport:
    """Cross-validated instance hardness.

    ``ih[i]`` is the share of (repeat, learner) test predictions for instance
    ``i`` that were wrong. Cells where a learner failed to train are left out
    of both the count and the denominator.
    """
    preds = run_pool(dataset, pool, plan, pipeline)
    wrong = preds.wrong
    trials = preds.valid.sum(axis=(0, 1))
    ih = wrong.sum(axis=(0, 1)) / np.maximum(trials, 1)
    per = {}
    for j, lbl in enumerate(preds.learners):
        t = preds.valid[:, j].sum(axis=0)
        per[lbl] = wrong[:, j].sum(axis=0) / np.maximum(t, 1)
    measures = instance_measures(dataset, k=k, seed=measure_seed) if with_measures else {}
    return HardnessReport(dataset.y.copy(), ih, per, measures, preds, dataset.name)


def dsh(report) -> float:
    """Dataset hardness: the mean instance hardness."""
    ih = report.ih if isinstance(report, HardnessReport) else np.asarray(report, dtype=float)
    if len(ih) == 0:
        raise ValueError("empty report")
    return float(np.mean(ih))


def idsh_from_predictions(preds: PoolPredictions) -> float:
    """``1 - mean_j mean_r MCC`` with MCC pooled over all test folds of a repeat."""
    R, J, _ = preds.preds.shape
    per_learner = []
    for j in range(J):
        scores = []
        for r in range(R):
            ok = preds.valid[r, j]
            if ok.any():
                scores.append(mcc(preds.y[ok], preds.preds[r, j, ok]))
        if scores:
            per_learner.append(np.mean(scores))
    return float(1.0 - np.mean(per_learner))


def idsh(dataset: Dataset, pool=None, plan: EvaluationPlan | None = None,
         pipeline: BaselinePipeline | None = None) -> float:
    return idsh_from_predictions(run_pool(dataset, pool, plan, pipeline))


__all__ = ["BaselinePipeline", "FittedPipeline", "PoolPredictions", "HardnessReport", "run_pool", "estimate_ih",
           "dsh", "idsh", "idsh_from_predictions", "derive_seed", "learner_labels"]
