"""Seven-metric multiclass evaluation: accuracy, macro precision/recall/F1,
macro Jaccard, Cohen's kappa, and mean one-vs-rest ROC AUC.

Macro averaging is unweighted over classes; undefined 0/0 per-class ratios
are reported as 0 (with a warning) so macro averages stay defined even when a
class is never predicted. AUC uses the rank-statistic formulation with
midrank tie handling, so an all-ties score column gives exactly 0.5.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

# Metric column order used by the report tables.
TABLE_COLUMNS = ("Accuracy", "Precision", "F1 Score", "Jaccard score",
                 "Cohen Kappa Score", "ROC AUC Mean")


@dataclass(frozen=True)
class ConfusionMatrix:
    """k x k counts; entry (t, p) counts rows of true class t predicted as p."""

    counts: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.counts, dtype=np.int64)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise ValueError(f"confusion matrix must be square, got {c.shape}")
        if (c < 0).any():
            raise ValueError("confusion matrix entries must be >= 0")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "counts", c)

    @property
    def k(self) -> int:
        return self.counts.shape[0]

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def confusion(true, pred, k: int) -> ConfusionMatrix:
    true = np.asarray(true, dtype=np.int64)
    pred = np.asarray(pred, dtype=np.int64)
    if true.shape != pred.shape or true.ndim != 1:
        raise ValueError("true and pred must be 1-D arrays of equal length")
    if true.size:
        for name, arr in (("true", true), ("pred", pred)):
            if arr.min() < 0 or arr.max() >= k:
                raise ValueError(f"{name} labels out of range [0, {k})")
    counts = np.zeros((k, k), dtype=np.int64)
    np.add.at(counts, (true, pred), 1)
    return ConfusionMatrix(counts)


def _safe_divide(num: np.ndarray, den: np.ndarray, what: str) -> np.ndarray:
    out = np.zeros_like(num, dtype=np.float64)
    ok = den > 0
    out[ok] = num[ok] / den[ok]
    if (~ok).any():
        warnings.warn(f"{what}: 0/0 for classes {np.flatnonzero(~ok).tolist()}, "
                      "reporting 0", RuntimeWarning, stacklevel=3)
    return out


def per_class_counts(cm: ConfusionMatrix):
    """(tp, fp, fn) vectors over classes."""
    c = cm.counts
    tp = np.diag(c).astype(np.float64)
    fp = c.sum(axis=0) - tp
    fn = c.sum(axis=1) - tp
    return tp, fp, fn


def basic_metrics(cm: ConfusionMatrix):
    """(accuracy, macro_precision, macro_recall, macro_f1, macro_jaccard)."""
    if cm.total == 0:
        raise ValueError("cannot compute metrics on an empty confusion matrix")
    tp, fp, fn = per_class_counts(cm)
    precision = _safe_divide(tp, tp + fp, "precision")
    recall = _safe_divide(tp, tp + fn, "recall")
    f1 = _safe_divide(2 * precision * recall, precision + recall, "f1")
    jaccard = _safe_divide(tp, tp + fp + fn, "jaccard")
    accuracy = float(tp.sum() / cm.total)
    return (accuracy, float(precision.mean()), float(recall.mean()),
            float(f1.mean()), float(jaccard.mean()))


def cohen_kappa(cm: ConfusionMatrix) -> float:
    """Chance-corrected agreement (p_o - p_e) / (1 - p_e)."""
    if cm.total == 0:
        raise ValueError("cannot compute kappa on an empty confusion matrix")
    c = cm.counts.astype(np.float64)
    total = c.sum()
    p_o = np.trace(c) / total
    p_e = float((c.sum(axis=1) / total) @ (c.sum(axis=0) / total))
    if p_e == 1.0:
        return 1.0 if p_o == 1.0 else 0.0
    return float((p_o - p_e) / (1.0 - p_e))


def _midranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.size, dtype=np.float64)
    sorted_vals = values[order]
    i = 0
    while i < values.size:
        j = i
        while j + 1 < values.size and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i:j + 1]] = 0.5 * (i + j) + 1.0  # average of ranks i+1 .. j+1
        i = j + 1
    return ranks


def roc_auc_ovr_mean(true, scores) -> float:
    """Unweighted mean of per-class one-vs-rest AUCs (Mann-Whitney, midranks).

    Classes with no positives or no negatives are skipped with a warning;
    raises if no class is computable.
    """
    true = np.asarray(true, dtype=np.int64)
    scores = np.asarray(scores, dtype=np.float64)
    if scores.ndim != 2 or scores.shape[0] != true.shape[0]:
        raise ValueError("scores must be (n_rows, n_classes)")
    if not np.isfinite(scores).all():
        raise ValueError("scores contain non-finite values")
    aucs, skipped = [], []
    for c in range(scores.shape[1]):
        pos = true == c
        n_pos = int(pos.sum())
        n_neg = true.size - n_pos
        if n_pos == 0 or n_neg == 0:
            skipped.append(c)
            continue
        ranks = _midranks(scores[:, c])
        auc = (ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)
        aucs.append(auc)
    if skipped:
        warnings.warn(f"ROC AUC skipped for classes {skipped} (missing positives "
                      "or negatives)", RuntimeWarning, stacklevel=2)
    if not aucs:
        raise ValueError("no class had both positives and negatives; AUC undefined")
    return float(np.mean(aucs))


@dataclass(frozen=True)
class MetricReport:
    """The seven headline metrics plus the per-class breakdown."""

    accuracy: float
    macro_precision: float
    macro_recall: float
    macro_f1: float
    macro_jaccard: float
    cohen_kappa: float
    roc_auc_ovr_mean: float
    per_class: dict

    def summary(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "macro_f1": self.macro_f1,
            "macro_jaccard": self.macro_jaccard,
            "cohen_kappa": self.cohen_kappa,
            "roc_auc_ovr_mean": self.roc_auc_ovr_mean,
        }

    def to_csv_row(self) -> list[float]:
        """Values in TABLE_COLUMNS order."""
        return [self.accuracy, self.macro_precision, self.macro_f1,
                self.macro_jaccard, self.cohen_kappa, self.roc_auc_ovr_mean]

    def to_json(self) -> dict:
        return {**self.summary(), "per_class": self.per_class}


def evaluate(true, pred, scores) -> MetricReport:
    """Assemble the full report from labels, predictions, and class scores."""
    true = np.asarray(true, dtype=np.int64)
    pred = np.asarray(pred, dtype=np.int64)
    scores = np.asarray(scores, dtype=np.float64)
    if not (true.shape == pred.shape and scores.shape == (true.size, scores.shape[1])):
        raise ValueError("inconsistent shapes for true/pred/scores")
    k = scores.shape[1]
    cm = confusion(true, pred, k)
    accuracy, precision, recall, f1, jaccard = basic_metrics(cm)
    kappa = cohen_kappa(cm)
    auc = roc_auc_ovr_mean(true, scores)
    tp, fp, fn = per_class_counts(cm)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # per-class 0/0 already warned above
        pc_precision = _safe_divide(tp, tp + fp, "precision")
        pc_recall = _safe_divide(tp, tp + fn, "recall")
        pc_f1 = _safe_divide(2 * pc_precision * pc_recall, pc_precision + pc_recall, "f1")
        pc_jaccard = _safe_divide(tp, tp + fp + fn, "jaccard")
    per_class = {
        "support": np.bincount(true, minlength=k).tolist(),
        "precision": pc_precision.tolist(),
        "recall": pc_recall.tolist(),
        "f1": pc_f1.tolist(),
        "jaccard": pc_jaccard.tolist(),
    }
    return MetricReport(accuracy, precision, recall, f1, jaccard, kappa, auc, per_class)
