"""Classification and regression evaluation.

Per-class overlap scores (intersection over union and F1) are computed from
a confusion matrix; a class that never occurs and is never predicted gets the
score 1.0 together with an explicit flag, so cross-class variance statistics
stay computable without hiding the anomaly.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ConfusionMatrix:
    """counts[t][p] = number of samples with true class t predicted as p."""

    counts: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.counts, dtype=np.int64)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise ValueError(f"counts must be square, got shape {c.shape}")
        if (c < 0).any():
            raise ValueError("counts must be nonnegative")
        object.__setattr__(self, "counts", c)

    @property
    def k(self):
        return self.counts.shape[0]

    @property
    def total(self):
        return int(self.counts.sum())


def confusion_matrix(y_true, y_pred, k):
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.shape != y_pred.shape or y_true.ndim != 1:
        raise ValueError("y_true and y_pred must be 1-D and of equal length")
    if y_true.size == 0:
        raise ValueError("cannot build a confusion matrix from zero samples")
    for name, labels in (("y_true", y_true), ("y_pred", y_pred)):
        bad = labels[(labels < 0) | (labels >= k)]
        if bad.size:
            raise ValueError(f"{name} contains labels outside [0, {k}): {bad[:5]}")
    counts = np.zeros((k, k), dtype=np.int64)
    np.add.at(counts, (y_true, y_pred), 1)
    return ConfusionMatrix(counts)


def accuracy(cm):
    if cm.total == 0:
        raise ValueError("confusion matrix has no samples")
    return float(np.trace(cm.counts)) / cm.total


def _per_class_counts(cm):
    tp = np.diag(cm.counts).astype(np.float64)
    fp = cm.counts.sum(axis=0) - tp
    fn = cm.counts.sum(axis=1) - tp
    return tp, fp, fn


def empty_class_mask(cm):
    """True for classes that never occur and are never predicted."""
    tp, fp, fn = _per_class_counts(cm)
    return (tp + fp + fn) == 0


def jaccard_per_class(cm):
    """Per-class TP / (TP + FP + FN); empty classes score 1.0 (see mask)."""
    if cm.total == 0:
        raise ValueError("confusion matrix has no samples")
    tp, fp, fn = _per_class_counts(cm)
    denom = tp + fp + fn
    out = np.ones(cm.k)
    seen = denom > 0
    out[seen] = tp[seen] / denom[seen]
    return out


def f1_per_class(cm):
    """Per-class 2 TP / (2 TP + FP + FN); empty classes score 1.0 (see mask)."""
    if cm.total == 0:
        raise ValueError("confusion matrix has no samples")
    tp, fp, fn = _per_class_counts(cm)
    denom = 2 * tp + fp + fn
    out = np.ones(cm.k)
    seen = denom > 0
    out[seen] = 2 * tp[seen] / denom[seen]
    return out


def jaccard_variance(values):
    """Population variance of a per-class score vector."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise ValueError("cannot take the variance of an empty vector")
    return float(np.var(values))


def pearson_r(y, y_hat):
    """Sample Pearson correlation; both inputs need nonzero variance."""
    y = np.asarray(y, dtype=np.float64)
    y_hat = np.asarray(y_hat, dtype=np.float64)
    if y.shape != y_hat.shape or y.ndim != 1:
        raise ValueError("inputs must be 1-D and of equal length")
    if y.size < 2:
        raise ValueError("need at least 2 samples for a correlation")
    yc = y - y.mean()
    pc = y_hat - y_hat.mean()
    denom = np.sqrt((yc * yc).sum() * (pc * pc).sum())
    if denom == 0:
        raise ValueError("correlation is undefined when either input has zero variance")
    return float((yc * pc).sum() / denom)


def rmse(y, y_hat):
    y = np.asarray(y, dtype=np.float64)
    y_hat = np.asarray(y_hat, dtype=np.float64)
    if y.shape != y_hat.shape:
        raise ValueError("inputs must have the same shape")
    return float(np.sqrt(np.mean((y - y_hat) ** 2)))


@dataclass(frozen=True)
class ClassificationReport:
    accuracy: float
    jaccard: tuple
    jaccard_variance: float
    jaccard_min: float
    f1: tuple
    empty_class_flags: tuple

    @classmethod
    def from_confusion(cls, cm):
        jac = jaccard_per_class(cm)
        return cls(
            accuracy=accuracy(cm),
            jaccard=tuple(float(v) for v in jac),
            jaccard_variance=jaccard_variance(jac),
            jaccard_min=float(jac.min()),
            f1=tuple(float(v) for v in f1_per_class(cm)),
            empty_class_flags=tuple(bool(v) for v in empty_class_mask(cm)),
        )

    def to_dict(self):
        return {
            "accuracy": self.accuracy,
            "jaccard": list(self.jaccard),
            "jaccard_variance": self.jaccard_variance,
            "jaccard_min": self.jaccard_min,
            "f1": list(self.f1),
            "empty_class_flags": list(self.empty_class_flags),
        }


@dataclass(frozen=True)
class RegressionReport:
    pearson_r: float
    rmse: float

    @classmethod
    def from_predictions(cls, y, y_hat):
        return cls(pearson_r=pearson_r(y, y_hat), rmse=rmse(y, y_hat))

    def to_dict(self):
        return {"pearson_r": self.pearson_r, "rmse": self.rmse}
