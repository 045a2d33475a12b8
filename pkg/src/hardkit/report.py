"""Multi-dataset report assembly."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .complexity import LOW_VARIANCE_MEASURES, MEASURES, complexity_profile, profiles_to_csv
from .data import Dataset, load_dataset, stratified_folds
from .hardness.estimate import estimate_ih
from .hardness.measures import MEASURE_NAMES
from .learners.base import default_pool
from .stats import hardness_histogram, spearman

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ReportOptions:
    seed: int = 42
    folds: int = 5
    repeats: int = 5
    k: int = 5
    pool: tuple = field(default_factory=lambda: tuple(default_pool()))
    label_column: object = None
    positive_label: object = None


def _name(item, i) -> str:
    if isinstance(item, Dataset):
        return item.name or f"dataset{i}"
    return Path(str(item)).stem


def analyze_one(data: Dataset, options: ReportOptions):
    """Complexity profile (with DSH and IDSH), hardness report and measure-vs-IH correlations."""
    plan = stratified_folds(data, options.seed, options.repeats, options.folds)
    report = estimate_ih(data, list(options.pool), plan, with_measures=True, k=options.k)
    profile = complexity_profile(data).with_hardness(report.dsh(), report.idsh())
    corr = {name: spearman(values, report.ih).to_dict() for name, values in report.measures.items()}
    return profile, report, corr


def batch_report(datasets, options: ReportOptions | None = None, out_dir=None) -> dict:
    """Analyze every dataset; failures are recorded under ``errors`` instead of raised.

    ``datasets`` may mix paths and :class:`Dataset` objects. When ``out_dir``
    is given, one instance CSV per dataset plus ``profiles.csv`` and
    ``report.json`` are written there.
    """
    options = options or ReportOptions()
    items = list(datasets)
    if not items:
        raise ValueError("need at least one dataset")
    entries, errors, profiles = [], [], []
    out = Path(out_dir) if out_dir is not None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
    seen: set[str] = set()
    for i, item in enumerate(items):
        name = _name(item, i)
        # repeated names would overwrite each other's instance CSVs
        if name in seen:
            name = f"{name}_{i}"
        seen.add(name)
        try:
            data = item if isinstance(item, Dataset) else load_dataset(item, options.label_column,
                                                                       options.positive_label)
            profile, report, corr = analyze_one(data, options)
        except Exception as exc:  # noqa: BLE001 - every failure is reported, none is fatal
            errors.append({"dataset": name, "error": f"{type(exc).__name__}: {exc}"})
            continue
        profiles.append(profile)
        n0, n1 = data.class_counts()
        hist = hardness_histogram(report, split_by_class=True)
        entries.append({
            "name": name, "n": data.n, "m": data.m, "class_counts": [n0, n1],
            "DSH": report.dsh(), "IDSH": report.idsh(),
            "complexity": {k: profile.values[k] for k in MEASURES},
            "measure_vs_ih": corr,
            "histogram": hist.to_dict(),
            "learner_dsh": {k: float(np.mean(v)) for k, v in report.learner_ih.items()},
        })
        if out is not None:
            (out / f"{name}_instances.csv").write_text(report.to_csv(), encoding="utf-8")

    bundle = {"schema_version": SCHEMA_VERSION,
              "options": {"seed": options.seed, "folds": options.folds, "repeats": options.repeats,
                          "k": options.k, "pool": [s.to_dict() for s in options.pool]},
              "datasets": entries, "errors": errors,
              "low_variance_measures": list(LOW_VARIANCE_MEASURES)}
    bundle["mean_measure_vs_ih"] = {
        m: float(np.mean([e["measure_vs_ih"][m]["rho"] for e in entries])) for m in MEASURE_NAMES
    } if entries else {}
    if len(entries) >= 3:
        for target in ("DSH", "IDSH"):
            tv = [e[target] for e in entries]
            bundle[f"measure_vs_{target}"] = {m: spearman([e["complexity"][m] for e in entries], tv).to_dict()
                                             for m in MEASURES}
    if out is not None:
        (out / "profiles.csv").write_text(profiles_to_csv(profiles), encoding="utf-8")
        (out / "report.json").write_text(json.dumps(bundle, indent=2), encoding="utf-8")
    return bundle
