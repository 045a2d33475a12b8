import math

import numpy as np


def confusion(true_labels, predicted_labels):
    """``(tp, tn, fp, fn)`` with 1 as the positive class."""
    t = np.asarray(true_labels)
    p = np.asarray(predicted_labels)
    if t.shape != p.shape:
        raise ValueError(f"length mismatch: {t.shape} vs {p.shape}")
    tp = int(np.sum((t == 1) & (p == 1)))
    tn = int(np.sum((t == 0) & (p == 0)))
    fp = int(np.sum((t == 0) & (p == 1)))
    fn = int(np.sum((t == 1) & (p == 0)))
    return tp, tn, fp, fn


def mcc(true_labels, predicted_labels) -> float:
    """Matthews correlation coefficient; 0 when any marginal of the confusion matrix is empty."""
    if len(true_labels) == 0:
        raise ValueError("mcc needs at least one prediction")
    tp, tn, fp, fn = confusion(true_labels, predicted_labels)
    den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)
    if den == 0:
        return 0.0
    return (tp * tn - fp * fn) / math.sqrt(den)


def cod_distance(preds_a, preds_b) -> float:
    """Classifier output difference: share of positions where two prediction vectors disagree."""
    a = np.asarray(preds_a)
    b = np.asarray(preds_b)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    if a.size == 0:
        raise ValueError("cod_distance needs non-empty predictions")
    return float(np.mean(a != b))


def cod_matrix(predictions) -> np.ndarray:
    """Pairwise COD over a (learners x positions) prediction array."""
    P = np.asarray(predictions)
    k = P.shape[0]
    out = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            out[i, j] = out[j, i] = cod_distance(P[i], P[j])
    return out
