"""Hardness-weighted SMOTE bagging and complexity-guided preprocessing selection."""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .complexity import f1_measure, n2_measure
from .data import Dataset, DatasetError, EvaluationPlan, NormalizationSpec, fit_normalizer, stratified_folds
from .hardness.estimate import derive_seed
from .hardness.measures import instance_measure, resolve_measure
from .learners.base import LearnerSpec, Model, fit, predict
from .learners.metrics import mcc
from .preprocess import FeatureSelectSpec, PreprocessWarning, ResampleSpec, resample, select_features

MAX_REDRAWS = 10
DEFAULT_BASE = LearnerSpec("cart")


# ---------------------------------------------------------------------------
# hardness-weighted bagging
# ---------------------------------------------------------------------------

def selection_probabilities(hardness) -> np.ndarray:
    """Draw probabilities for the members of one class.

    ``f_i = 1/n + (1 - h_i)``, normalized to sum to one. Constant hardness
    gives exactly ``1/n`` for every member.
    """
    h = np.asarray(hardness, dtype=float)
    n = len(h)
    if n == 0:
        raise ValueError("empty class")
    if np.any((h < 0) | (h > 1)) or not np.all(np.isfinite(h)):
        raise ValueError("hardness values must lie in [0, 1]")
    if np.all(h == h[0]):
        return np.full(n, 1.0 / n)
    f = 1.0 / n + (1.0 - h)
    return f / f.sum()


def weighted_draw(p: np.ndarray, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` positions drawn with replacement by inverse-CDF lookup."""
    cdf = np.cumsum(p)
    cdf[-1] = 1.0
    return np.minimum(np.searchsorted(cdf, rng.random(size), side="right"), len(p) - 1)


@dataclass(frozen=True, eq=False)
class EnsembleModel:
    """Mean-vote ensemble; ``bags[b]`` holds the training-row indices drawn for model ``b``."""

    models: tuple[Model, ...]
    bags: tuple[np.ndarray, ...]
    measure: str | None = None
    seed: int = 0

    def __post_init__(self):
        if not self.models:
            raise ValueError("an ensemble needs at least one model")

    @property
    def n_estimators(self) -> int:
        return len(self.models)

    def vote_fraction(self, rows) -> np.ndarray:
        rows = np.asarray(rows, dtype=float)
        return np.mean([predict(m, rows) for m in self.models], axis=0)

    def predict(self, rows) -> np.ndarray:
        return (self.vote_fraction(rows) >= 0.5).astype(np.int64)


def _train_bags(train: Dataset, hardness: np.ndarray, n_estimators: int, base: LearnerSpec, seed: int,
                k: int, measure: str | None) -> EnsembleModel:
    train.require_both_classes("bagging")
    if n_estimators < 1:
        raise ValueError("n_estimators must be >= 1")
    minority = train.minority_label()
    P = np.flatnonzero(train.y == minority)
    N = np.flatnonzero(train.y != minority)
    if len(P) < 2:
        raise DatasetError("the minority class needs at least 2 instances for SMOTE")
    pP = selection_probabilities(hardness[P])
    pN = selection_probabilities(hardness[N])
    rng = np.random.default_rng(seed)

    models, bags = [], []
    for b in range(n_estimators):
        for _ in range(MAX_REDRAWS):
            bag = np.concatenate([P[weighted_draw(pP, len(P), rng)], N[weighted_draw(pN, len(N), rng)]])
            # SMOTE needs two distinct minority rows to interpolate between
            if len(np.unique(bag[: len(P)])) >= 2:
                break
        else:
            raise DatasetError(f"bag {b}: could not draw two distinct minority instances in {MAX_REDRAWS} tries")
        data = resample(train.subset(bag), ResampleSpec("smote", k=k, seed=derive_seed(seed, b, 0)))
        models.append(fit(base.with_seed(derive_seed(seed, b, 1)), data))
        bags.append(bag)
    return EnsembleModel(tuple(models), tuple(bags), measure, seed)


def hmsmote_bagging_train(train: Dataset, measure: str = "kDN", n_estimators: int = 50,
                          base: LearnerSpec = DEFAULT_BASE, seed: int = 0, k: int = 5,
                          hardness=None) -> EnsembleModel:
    """Bagging with per-class draws favouring easy instances, then SMOTE per bag.

    The measure is computed once on the whole training set (``hardness``
    may be passed to skip that). Each bag draws ``|P|`` minority and ``|N|``
    majority rows with replacement.
    """
    name = resolve_measure(measure)
    if hardness is None:
        hardness = instance_measure(train, name, k=k, seed=seed)
    hardness = np.asarray(hardness, dtype=float)
    if hardness.shape != (train.n,):
        raise ValueError("need one hardness value per training instance")
    return _train_bags(train, hardness, n_estimators, base, seed, k, name)


def smote_bagging_train(train: Dataset, n_estimators: int = 50, base: LearnerSpec = DEFAULT_BASE,
                        seed: int = 0, k: int = 5) -> EnsembleModel:
    """Uniform-bootstrap SMOTE bagging; shares the draw path with the weighted variant."""
    return _train_bags(train, np.zeros(train.n), n_estimators, base, seed, k, None)


def cross_validate_ensemble(dataset: Dataset, trainer, plan: EvaluationPlan | None = None) -> dict:
    """Per-fold test MCC of ``trainer(train_dataset, seed) -> EnsembleModel``.

    Returns ``{"mcc": [...], "mean": float}`` in plan order. Training rows are
    presented in canonical order, seeds come from ``(plan.seed, repeat, fold)``.
    """
    plan = plan or stratified_folds(dataset)
    rank = np.empty(dataset.n, dtype=np.int64)
    rank[dataset.canonical_order()] = np.arange(dataset.n)
    scores = []
    for r, f, tr, te in plan.splits():
        tr = tr[np.argsort(rank[tr], kind="stable")]
        model = trainer(dataset.subset(tr), derive_seed(plan.seed, r, f))
        scores.append(mcc(dataset.y[te], model.predict(dataset.X[te])))
    return {"mcc": scores, "mean": float(np.mean(scores))}


# ---------------------------------------------------------------------------
# complexity-guided preprocessing
# ---------------------------------------------------------------------------

STAGE1 = ("standard", "none")
STAGE2 = ("skb_anova", "skb_mutual", "linsvm_importance", "tree_importance", "none")
STAGE3 = ("smote", "border_smote", "smote_tomek", "smote_enn")


def pick_min(values: dict[str, float], noop: str | None = "none") -> str:
    """Candidate with the smallest value.

    Ties go to ``noop`` when it is among the minima (leaving data untouched
    is preferred when nothing improves), otherwise to the first listed.
    """
    best = min(values.values())
    tied = [c for c, v in values.items() if v == best]
    if noop in tied:
        return noop
    return tied[0]


@dataclass(frozen=True, eq=False)
class PreprocessPlan:
    """Choices made at each stage plus every candidate's measure value."""

    normalization: str
    selector: str
    resampler: str
    normalizer: NormalizationSpec
    kept: np.ndarray
    candidates: dict = field(default_factory=dict)
    seed: int = 0

    @property
    def chosen_values(self) -> dict[str, float]:
        c = self.candidates
        return {"N2": c["normalization"][self.normalization], "F1_selector": c["selector"][self.selector],
                "F1_resampler": c["resampler"][self.resampler]}

    def transform(self, X) -> np.ndarray:
        """Apply the fitted normalization and feature selection to new rows."""
        return self.normalizer.transform(np.asarray(X, dtype=float))[:, self.kept]

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "seed": self.seed,
            "normalization": self.normalization,
            "selector": self.selector,
            "resampler": self.resampler,
            "kept_features": [int(i) for i in self.kept],
            "chosen_values": self.chosen_values,
            "candidates": {stage: {k: (None if v is None else float(v)) for k, v in vals.items()}
                           for stage, vals in self.candidates.items()},
            "failed": {stage: sorted(k for k, v in vals.items() if v is None)
                       for stage, vals in self.candidates.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _valid(values: dict) -> dict:
    return {k: v for k, v in values.items() if v is not None}


def adaptive_preprocess(train: Dataset, seed: int = 0, normalizations=STAGE1, selectors=STAGE2,
                        resamplers=STAGE3) -> tuple[Dataset, PreprocessPlan]:
    """Pick normalization by N2, then a feature selector by F1, then a resampler by F1.

    Each stage scores its candidates on the output of the previous stage
    and keeps the minimum. A candidate that raises is skipped with a
    :class:`PreprocessWarning`; the call fails only if a whole stage fails.
    """
    train.require_both_classes("adaptive preprocessing")

    norm_vals, norm_specs, norm_data = {}, {}, {}
    for kind in normalizations:
        spec = fit_normalizer(train, kind)
        data = train.with_features(spec.transform(train.X))
        norm_specs[kind], norm_data[kind] = spec, data
        norm_vals[kind] = n2_measure(data)
    norm = pick_min(norm_vals)
    stage1 = norm_data[norm]

    sel_vals, sel_out = {}, {}
    for method in selectors:
        try:
            sel_out[method] = select_features(stage1, FeatureSelectSpec(method, seed=seed))
            sel_vals[method] = f1_measure(sel_out[method][0])
        except (ValueError, DatasetError) as exc:
            warnings.warn(f"selector {method} failed: {exc}", PreprocessWarning, stacklevel=2)
            sel_vals[method] = None
    if not _valid(sel_vals):
        raise DatasetError("every feature selector failed")
    selector = pick_min(_valid(sel_vals))
    stage2, kept = sel_out[selector]

    res_vals, res_out = {}, {}
    for method in resamplers:
        try:
            res_out[method] = resample(stage2, ResampleSpec(method, seed=seed))
            res_vals[method] = f1_measure(res_out[method])
        except (ValueError, DatasetError) as exc:
            warnings.warn(f"resampler {method} failed: {exc}", PreprocessWarning, stacklevel=2)
            res_vals[method] = None
    if not _valid(res_vals):
        raise DatasetError("every resampler failed")
    resampler = pick_min(_valid(res_vals), noop=None)

    plan = PreprocessPlan(norm, selector, resampler, norm_specs[norm], np.asarray(kept),
                          {"normalization": norm_vals, "selector": sel_vals, "resampler": res_vals}, seed)
    return res_out[resampler], plan
