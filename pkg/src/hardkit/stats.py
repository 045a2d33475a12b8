"""Rank correlation, significance tests and hardness histograms."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as _st

BAND_CUTS = (0.2, 0.4, 0.6, 0.8)
BANDS = ("very weak", "weak", "moderate", "strong", "very strong")
ALPHA = 0.05


def strength_band(rho: float) -> str:
    """Verbal strength of ``|rho|``: cut points 0.2, 0.4, 0.6 and 0.8 start a new band."""
    a = abs(rho)
    for cut, band in zip(BAND_CUTS, BANDS):
        if a < cut:
            return band
    return BANDS[-1]


@dataclass(frozen=True)
class CorrelationResult:
    rho: float
    p_value: float
    n: int
    degenerate: bool = False

    @property
    def band(self) -> str:
        return strength_band(self.rho)

    @property
    def significant(self) -> bool:
        return self.p_value < ALPHA

    def to_dict(self) -> dict:
        return {"rho": self.rho, "p_value": self.p_value, "n": self.n, "band": self.band,
                "significant": self.significant, "degenerate": self.degenerate}


def midranks(x) -> np.ndarray:
    """Ranks starting at 1; tied values share the mean of their positions."""
    return _st.rankdata(np.asarray(x, dtype=float), method="average")


def spearman(x, y) -> CorrelationResult:
    """Spearman's rho as the Pearson correlation of midranks, with a Student-t p-value.

    A constant input yields ``rho = 0``, ``p = 1`` and ``degenerate = True``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    n = len(x)
    if n < 3:
        raise ValueError("spearman needs at least 3 pairs")
    rx = midranks(x) - (n + 1) / 2.0
    ry = midranks(y) - (n + 1) / 2.0
    sxx, syy = float(rx @ rx), float(ry @ ry)
    if sxx == 0 or syy == 0:
        return CorrelationResult(0.0, 1.0, n, True)
    rho = float(rx @ ry) / math.sqrt(sxx * syy)
    rho = max(-1.0, min(1.0, rho))
    if abs(rho) == 1.0:
        return CorrelationResult(rho, 0.0, n)
    t = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
    p = float(2.0 * _st.t.sf(abs(t), n - 2))
    return CorrelationResult(rho, min(1.0, p), n)


def correlation_matrix(columns: dict) -> dict:
    """Pairwise :func:`spearman` over named columns; ``out[a][b]`` is symmetric."""
    names = list(columns)
    if len(names) < 2:
        raise ValueError("need at least two columns")
    out = {a: {} for a in names}
    for i, a in enumerate(names):
        for b in names[i:]:
            res = spearman(columns[a], columns[b])
            if a == b:
                res = CorrelationResult(1.0, 0.0, res.n, res.degenerate)
            out[a][b] = out[b][a] = res
    return out


def wilcoxon(a, b) -> dict:
    """Two-sided Wilcoxon signed-rank test on paired samples (e.g. per-fold scores)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError("paired samples must have equal length")
    d = a - b
    if not np.any(d):
        return {"statistic": 0.0, "p_value": 1.0, "n": len(d), "median_diff": 0.0}
    res = _st.wilcoxon(a, b)
    return {"statistic": float(res.statistic), "p_value": float(res.pvalue), "n": len(d),
            "median_diff": float(np.median(d))}


# ---------------------------------------------------------------------------
# histogram
# ---------------------------------------------------------------------------

BIN_LABELS = ("0", *(f"({i / 10:.1f},{(i + 1) / 10:.1f})" if i == 0 else f"[{i / 10:.1f},{(i + 1) / 10:.1f})"
                     for i in range(10)), "1")


def hardness_bin(v: float) -> int:
    """0 for exactly 0, 11 for exactly 1, otherwise ``1 + floor(10 v)``."""
    if v == 0:
        return 0
    if v == 1:
        return 11
    return 1 + int(math.floor(10 * v))


@dataclass(frozen=True)
class HardnessHistogram:
    labels: tuple[str, ...]
    counts: tuple[int, ...]
    by_class: dict | None = None

    @property
    def n(self) -> int:
        return sum(self.counts)

    @property
    def percentages(self) -> tuple[float, ...]:
        return tuple(100.0 * c / self.n for c in self.counts)

    @property
    def cumulative(self) -> tuple[float, ...]:
        out = np.cumsum(self.counts) * 100.0 / self.n
        out[-1] = 100.0
        return tuple(float(v) for v in out)

    def share_below(self, threshold: float) -> float:
        """Fraction of instances whose bin lies entirely below ``threshold`` (a multiple of 0.1)."""
        upto = 1 + int(round(threshold * 10))
        return sum(self.counts[:upto]) / self.n

    def to_dict(self) -> dict:
        out = {"bins": list(self.labels), "counts": list(self.counts), "percent": list(self.percentages),
               "cumulative_percent": list(self.cumulative)}
        if self.by_class:
            out["by_class"] = {str(k): v.to_dict() for k, v in self.by_class.items()}
        return out


def _counts(values) -> tuple[int, ...]:
    c = [0] * 12
    for v in values:
        c[hardness_bin(float(v))] += 1
    return tuple(c)


def hardness_histogram(report_or_values, labels=None, split_by_class: bool = False) -> HardnessHistogram:
    """Twelve bins: exactly 0, ten 0.1-wide interior bins, exactly 1.

    Accepts a report with ``ih`` and ``y`` or a plain value sequence (pass
    ``labels`` to split by class).
    """
    if hasattr(report_or_values, "ih"):
        values = np.asarray(report_or_values.ih, dtype=float)
        labels = report_or_values.y if labels is None else labels
    else:
        values = np.asarray(report_or_values, dtype=float)
    if len(values) == 0:
        raise ValueError("empty hardness sequence")
    by_class = None
    if split_by_class:
        if labels is None:
            raise ValueError("labels are needed to split by class")
        labels = np.asarray(labels)
        by_class = {int(c): HardnessHistogram(BIN_LABELS, _counts(values[labels == c]))
                    for c in np.unique(labels)}
    return HardnessHistogram(BIN_LABELS, _counts(values), by_class)
