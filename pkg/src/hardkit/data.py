"""Dataset container, ingestion, normalization, fold planning and distances.

Everything downstream works on :class:`Dataset`, an immutable feature table
with binary labels (1 = positive / defective / minority by default).
"""
from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.spatial.distance import pdist, squareform


class DatasetError(ValueError):
    """Raised for unreadable, malformed or degenerate datasets."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Dataset:
    """Numeric feature table ``X`` (n x m) with labels ``y`` in {0, 1}."""

    X: np.ndarray
    y: np.ndarray
    feature_names: tuple[str, ...] = ()
    name: str = ""

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y)
        if X.ndim != 2:
            raise DatasetError(f"features must be 2-D, got shape {X.shape}")
        n, m = X.shape
        if n < 2 or m < 1:
            raise DatasetError(f"need n >= 2 and m >= 1, got n={n}, m={m}")
        if y.shape != (n,):
            raise DatasetError(f"labels shape {y.shape} does not match n={n}")
        if not np.all(np.isfinite(X)):
            bad = np.argwhere(~np.isfinite(X))[0]
            raise DatasetError(f"non-finite feature value at row {bad[0]}, column {bad[1]}")
        if not np.all((y == 0) | (y == 1)):
            raise DatasetError("labels must be 0 or 1")
        names = tuple(self.feature_names) or tuple(f"f{j}" for j in range(m))
        if len(names) != m:
            raise DatasetError(f"{len(names)} feature names for {m} columns")
        object.__setattr__(self, "X", _frozen(X))
        object.__setattr__(self, "y", _frozen(y.astype(np.int64)))
        object.__setattr__(self, "feature_names", names)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def m(self) -> int:
        return self.X.shape[1]

    def class_counts(self) -> tuple[int, int]:
        n1 = int(self.y.sum())
        return self.n - n1, n1

    def minority_label(self) -> int:
        """Label of the smaller class; label 1 on a tie."""
        n0, n1 = self.class_counts()
        return 0 if n0 < n1 else 1

    def require_both_classes(self, what: str = "operation") -> None:
        n0, n1 = self.class_counts()
        if n0 == 0 or n1 == 0:
            raise DatasetError(f"{what} requires both classes; got counts {n0}/{n1}")

    def subset(self, idx) -> "Dataset":
        idx = np.asarray(idx)
        return Dataset(self.X[idx], self.y[idx], self.feature_names, self.name)

    def select_columns(self, cols) -> "Dataset":
        cols = [int(c) for c in cols]
        return Dataset(self.X[:, cols], self.y,
                       tuple(self.feature_names[c] for c in cols), self.name)

    def with_features(self, X, feature_names=None) -> "Dataset":
        return Dataset(X, self.y, feature_names or self.feature_names, self.name)

    def canonical_order(self) -> np.ndarray:
        """Row order that depends only on row contents, not on row position.

        Rows are sorted lexicographically by feature values and then label;
        identical rows keep their input order.
        """
        keys = [self.y] + [self.X[:, j] for j in range(self.m - 1, -1, -1)]
        return np.lexsort(keys)


# ---------------------------------------------------------------------------
# ingestion
# ---------------------------------------------------------------------------

def _resolve_label_column(header: list[str], label_column) -> int:
    if label_column is None:
        return len(header) - 1
    if isinstance(label_column, int) or (isinstance(label_column, str) and label_column.lstrip("-").isdigit()
                                         and label_column not in header):
        idx = int(label_column)
        if idx < 0:
            idx += len(header)
        if not 0 <= idx < len(header):
            raise DatasetError(f"label column index {label_column} out of range")
        return idx
    if label_column not in header:
        raise DatasetError(f"label column {label_column!r} not found in header")
    return header.index(label_column)


def _read_csv(path: Path) -> tuple[list[str], list[list[str]], int]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise DatasetError(f"{path}: empty file")
    return [h.strip() for h in rows[0]], rows[1:], 2


def _read_arff(path: Path) -> tuple[list[str], list[list[str]], int]:
    header: list[str] = []
    data: list[list[str]] = []
    in_data = False
    first_data_line = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("%"):
                continue
            low = line.lower()
            if not in_data:
                if low.startswith("@attribute"):
                    parts = line.split(None, 2)
                    if len(parts) < 3:
                        raise DatasetError(f"{path}:{lineno}: malformed @attribute line")
                    header.append(parts[1].strip("'\""))
                elif low.startswith("@data"):
                    in_data = True
                    first_data_line = lineno + 1
                continue
            data.append(next(csv.reader([line])))
    if not header:
        raise DatasetError(f"{path}: no @attribute declarations")
    return header, data, first_data_line


def load_dataset(path, label_column=None, positive_label=None, drop_columns: Sequence[str] = (),
                 binarize: bool = False) -> Dataset:
    """Read a CSV (header row) or ARFF-lite file into a :class:`Dataset`.

    The label column defaults to the last column. Labels are mapped to {0, 1}
    with the rarer value mapped to 1 unless ``positive_label`` is given; on a
    tie the value that sorts last becomes 1. ``binarize`` turns numeric labels
    such as bug counts into ``label > 0``. Columns in ``drop_columns`` (e.g.
    file names or versions) are ignored.
    """
    path = Path(path)
    if not path.is_file():
        raise DatasetError(f"no such file: {path}")
    if path.suffix.lower() == ".arff":
        header, rows, first_line = _read_arff(path)
    else:
        header, rows, first_line = _read_csv(path)
    if not rows:
        raise DatasetError(f"{path}: no data rows")

    label_idx = _resolve_label_column(header, label_column)
    dropped = set(drop_columns)
    unknown = dropped - set(header)
    if unknown:
        raise DatasetError(f"cannot drop unknown columns: {sorted(unknown)}")
    feat_idx = [j for j, h in enumerate(header) if j != label_idx and h not in dropped]
    if not feat_idx:
        raise DatasetError(f"{path}: no feature columns")

    X = np.empty((len(rows), len(feat_idx)))
    raw_labels = []
    for r, row in enumerate(rows):
        if len(row) != len(header):
            raise DatasetError(f"{path}: row {r} has {len(row)} fields, expected {len(header)}")
        for c, j in enumerate(feat_idx):
            cell = row[j].strip()
            try:
                v = float(cell)
            except ValueError:
                raise DatasetError(f"{path}: row {r}, column {header[j]!r}: non-numeric value {cell!r}") from None
            if not math.isfinite(v):
                raise DatasetError(f"{path}: row {r}, column {header[j]!r}: missing or non-finite value {cell!r}")
            X[r, c] = v
        raw_labels.append(row[label_idx].strip().strip("'\""))

    if binarize:
        try:
            raw_labels = ["1" if float(v) > 0 else "0" for v in raw_labels]
        except ValueError:
            raise DatasetError("binarize requires numeric labels") from None
        if positive_label is None:
            positive_label = "1"

    counts = Counter(raw_labels)
    if len(counts) != 2:
        raise DatasetError(f"label column must have exactly 2 distinct values, found {len(counts)}: "
                           f"{sorted(counts)[:5]}")
    if positive_label is None:
        (a, na), (b, nb) = sorted(counts.items())
        positive = a if na < nb else b
    else:
        positive = str(positive_label)
        if positive not in counts:
            # tolerate numeric spellings like 1 vs 1.0
            matches = [v for v in counts if _same_number(v, positive)]
            if not matches:
                raise DatasetError(f"positive label {positive_label!r} not among {sorted(counts)}")
            positive = matches[0]
    y = np.array([1 if v == positive else 0 for v in raw_labels])
    names = tuple(header[j] for j in feat_idx)
    return Dataset(X, y, names, name=path.stem)


def _same_number(a: str, b: str) -> bool:
    try:
        return float(a) == float(b)
    except ValueError:
        return False


def save_dataset(dataset: Dataset, path, label_name: str = "label") -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(list(dataset.feature_names) + [label_name])
        for row, label in zip(dataset.X, dataset.y):
            w.writerow([repr(float(v)) for v in row] + [int(label)])


# ---------------------------------------------------------------------------
# normalization
# ---------------------------------------------------------------------------

NORMALIZATIONS = ("standard", "minmax", "none")


@dataclass(frozen=True, eq=False)
class NormalizationSpec:
    """Per-feature affine map ``(x - offset) / scale`` fitted on training data.

    A scale of zero marks a constant feature, which maps to 0.
    """

    kind: str
    offset: np.ndarray
    scale: np.ndarray

    def transform(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if self.kind == "none":
            return X.copy()
        safe = np.where(self.scale > 0, self.scale, 1.0)
        out = (X - self.offset) / safe
        out[:, self.scale == 0] = 0.0
        return out

    def inverse_transform(self, Z) -> np.ndarray:
        Z = np.asarray(Z, dtype=float)
        if self.kind == "none":
            return Z.copy()
        return Z * self.scale + self.offset


def fit_normalizer(train: Dataset, kind: str = "standard") -> NormalizationSpec:
    if kind not in NORMALIZATIONS:
        raise ValueError(f"unknown normalization {kind!r}; expected one of {NORMALIZATIONS}")
    X = train.X
    if kind == "standard":
        offset = X.mean(axis=0)
        scale = X.std(axis=0)  # population std
    elif kind == "minmax":
        offset = X.min(axis=0)
        scale = X.max(axis=0) - offset
    else:
        offset = np.zeros(train.m)
        scale = np.ones(train.m)
    return NormalizationSpec(kind, _frozen(offset), _frozen(scale))


def apply_normalizer(spec: NormalizationSpec, data: Dataset) -> Dataset:
    return data.with_features(spec.transform(data.X))


def normalize(data: Dataset, kind: str = "standard") -> Dataset:
    return apply_normalizer(fit_normalizer(data, kind), data)


# ---------------------------------------------------------------------------
# fold planning
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EvaluationPlan:
    """Repeated stratified k-fold partition.

    ``partitions[r][f]`` holds the sorted test indices of fold ``f`` in repeat ``r``.
    """

    seed: int
    repeats: int
    folds: int
    partitions: tuple[tuple[np.ndarray, ...], ...] = field(repr=False)

    def splits(self):
        """Yield ``(repeat, fold, train_idx, test_idx)``."""
        for r, parts in enumerate(self.partitions):
            n = sum(len(p) for p in parts)
            for f, test in enumerate(parts):
                mask = np.ones(n, dtype=bool)
                mask[test] = False
                yield r, f, np.flatnonzero(mask), test

    @property
    def n(self) -> int:
        return sum(len(p) for p in self.partitions[0])


def stratified_folds(dataset: Dataset, seed: int = 42, repeats: int = 5, folds: int = 5) -> EvaluationPlan:
    """Seeded repeated stratified k-fold plan.

    Each class is shuffled with a PCG64 generator seeded by ``seed`` (one
    stream shared by all repeats, classes visited 0 then 1) and dealt
    round-robin into folds; class 1 continues dealing where class 0 stopped
    so fold sizes differ by at most one. Shuffling starts from the canonical
    row order, so permuting the rows of the dataset moves the folds with them.
    """
    if repeats < 1 or folds < 2:
        raise ValueError("need repeats >= 1 and folds >= 2")
    y = dataset.y
    for c in (0, 1):
        count = int(np.sum(y == c))
        if count < folds:
            raise DatasetError(f"class {c} has {count} members, fewer than folds={folds}")
    rank = np.empty(dataset.n, dtype=np.int64)
    rank[dataset.canonical_order()] = np.arange(dataset.n)
    members = []
    for c in (0, 1):
        idx = np.flatnonzero(y == c)
        members.append(idx[np.argsort(rank[idx], kind="stable")])

    rng = np.random.Generator(np.random.PCG64(seed))
    partitions = []
    for _ in range(repeats):
        buckets: list[list[int]] = [[] for _ in range(folds)]
        start = 0
        for idx in members:
            shuffled = idx[rng.permutation(len(idx))]
            for pos, i in enumerate(shuffled):
                buckets[(start + pos) % folds].append(int(i))
            start = (start + len(idx)) % folds
        partitions.append(tuple(_frozen(np.sort(np.array(b, dtype=np.int64))) for b in buckets))
    return EvaluationPlan(seed, repeats, folds, tuple(partitions))


# ---------------------------------------------------------------------------
# distances
# ---------------------------------------------------------------------------

def distance_matrix(dataset_or_X) -> np.ndarray:
    """Symmetric n x n Euclidean distance matrix with a zero diagonal."""
    X = dataset_or_X.X if isinstance(dataset_or_X, Dataset) else np.asarray(dataset_or_X, dtype=float)
    if X.shape[0] < 2:
        return np.zeros((X.shape[0], X.shape[0]))
    return squareform(pdist(X, "euclidean"))
