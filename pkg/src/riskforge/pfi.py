"""Permutation feature importance, global and per risk class.

Shuffling one column breaks its relationship with the target while keeping
its marginal distribution; the resulting performance drop is that feature's
importance. Works against anything with a `predict(X)` method. The input
matrix is never mutated: every repeat permutes a fresh copy seeded by
(seed, feature, repeat), so results are independent of evaluation order.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ._seeds import derive_seed
from .metrics import basic_metrics, confusion

MODES = ("difference", "ratio")
METRICS = ("error_rate", "one_minus_f1")


def _error(y: np.ndarray, pred: np.ndarray, metric: str, k: int) -> float:
    if metric == "error_rate":
        return float(np.mean(pred != y))
    if metric == "one_minus_f1":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            _, _, _, f1, _ = basic_metrics(confusion(y, pred, k))
        return 1.0 - f1
    raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")


def _permuted_prediction(model, X: np.ndarray, j: int, seed: int, r: int) -> np.ndarray:
    rng = np.random.default_rng(derive_seed(seed, "pfi", j, r))
    Xp = X.copy()
    Xp[:, j] = Xp[rng.permutation(X.shape[0]), j]
    return np.asarray(model.predict(Xp))


def _check_inputs(X, y, repeats):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise ValueError("X must be (m, p) with one label per row")
    if X.shape[0] < 2:
        raise ValueError("need at least 2 rows to permute")
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    return X, y


def permutation_importance(model, X, y, repeats: int = 30, seed: int = 0,
                           mode: str = "difference",
                           metric: str = "error_rate") -> np.ndarray:
    """Per-feature mean error increase (difference) or error ratio.

    Ratio mode is undefined at zero baseline error and raises with a pointer
    to difference mode.
    """
    X, y = _check_inputs(X, y, repeats)
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    k = int(getattr(model, "n_classes", 0)) or int(y.max()) + 1
    e_base = _error(y, np.asarray(model.predict(X)), metric, k)
    if mode == "ratio" and e_base == 0.0:
        raise ValueError("baseline error is 0, the ratio is undefined; "
                         "use mode='difference'")
    out = np.empty(X.shape[1])
    for j in range(X.shape[1]):
        vals = []
        for r in range(repeats):
            e_perm = _error(y, _permuted_prediction(model, X, j, seed, r), metric, k)
            vals.append(e_perm - e_base if mode == "difference" else e_perm / e_base)
        out[j] = float(np.mean(vals))
    return out


def per_class_importance(model, X, y, repeats: int = 30, seed: int = 0) -> np.ndarray:
    """(k, p) table of per-class recall degradation, in percentage points.

    Class c's error is the one-vs-rest error on its own rows (1 - recall);
    entries are 100 times the mean error increase across repeats.
    """
    X, y = _check_inputs(X, y, repeats)
    k = int(getattr(model, "n_classes", 0)) or int(y.max()) + 1
    class_rows = [np.flatnonzero(y == c) for c in range(k)]
    for c, rows in enumerate(class_rows):
        if rows.size == 0:
            raise ValueError(f"class {c} absent from y")
    pred = np.asarray(model.predict(X))
    base = np.array([np.mean(pred[rows] != c) for c, rows in enumerate(class_rows)])
    out = np.zeros((k, X.shape[1]))
    for j in range(X.shape[1]):
        for r in range(repeats):
            pred_p = _permuted_prediction(model, X, j, seed, r)
            for c, rows in enumerate(class_rows):
                out[c, j] += np.mean(pred_p[rows] != c) - base[c]
    return 100.0 * out / repeats


@dataclass(frozen=True)
class ImportanceTable:
    """Global and per-class importance with the settings that produced it."""

    feature_names: tuple[str, ...]
    class_names: tuple[str, ...]
    global_importance: np.ndarray
    global_std: np.ndarray
    per_class: np.ndarray
    repeats: int
    seed: int
    metric: str

    def to_json(self) -> dict:
        return {
            "metric": self.metric,
            "repeats": self.repeats,
            "seed": self.seed,
            "feature_names": list(self.feature_names),
            "class_names": list(self.class_names),
            "global": self.global_importance.tolist(),
            "global_std": self.global_std.tolist(),
            "per_class": self.per_class.tolist(),
        }

    def to_csv(self) -> str:
        """Features as rows, risk classes as columns."""
        lines = ["Features," + ",".join(self.class_names)]
        for j, name in enumerate(self.feature_names):
            lines.append(name + "," + ",".join(f"{self.per_class[c, j]:.4f}"
                                               for c in range(len(self.class_names))))
        return "\n".join(lines) + "\n"


def importance_table(model, X, y, feature_names, class_names, repeats: int = 30,
                     seed: int = 0, metric: str = "error_rate") -> ImportanceTable:
    """Build the combined table, sharing one permuted prediction per
    (feature, repeat) between the global and per-class scores."""
    X, y = _check_inputs(X, y, repeats)
    k = len(class_names)
    p = X.shape[1]
    class_rows = [np.flatnonzero(y == c) for c in range(k)]
    pred = np.asarray(model.predict(X))
    e_base = _error(y, pred, metric, k)
    base_class = np.array([np.mean(pred[rows] != c) if rows.size else 0.0
                           for c, rows in enumerate(class_rows)])
    global_mean = np.empty(p)
    global_std = np.empty(p)
    per_class = np.zeros((k, p))
    for j in range(p):
        deltas = np.empty(repeats)
        for r in range(repeats):
            pred_p = _permuted_prediction(model, X, j, seed, r)
            deltas[r] = _error(y, pred_p, metric, k) - e_base
            for c, rows in enumerate(class_rows):
                if rows.size:
                    per_class[c, j] += np.mean(pred_p[rows] != c) - base_class[c]
        global_mean[j] = deltas.mean()
        global_std[j] = deltas.std()
    per_class = 100.0 * per_class / repeats
    return ImportanceTable(tuple(feature_names), tuple(class_names), global_mean,
                           global_std, per_class, repeats, seed, metric)


def rank_features(table: ImportanceTable, class_index: int | None = None) -> list[int]:
    """Feature indices by descending importance; ties keep the lower index."""
    if class_index is None:
        values = table.global_importance
    else:
        if not 0 <= class_index < len(table.class_names):
            raise ValueError(f"class index {class_index} out of range")
        values = table.per_class[class_index]
    return np.argsort(-values, kind="stable").tolist()


def importance_svg(names, values, title: str = "", width: int = 640,
                   bar_height: int = 18) -> str:
    """Minimal horizontal-bar chart, largest value first."""
    order = np.argsort(-np.asarray(values, dtype=np.float64), kind="stable")
    names = [str(names[i]) for i in order]
    values = [float(values[i]) for i in order]
    vmax = max((abs(v) for v in values), default=1.0) or 1.0
    label_w, pad, top = 230, 6, 28
    height = top + len(values) * (bar_height + pad) + pad
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
             f'<text x="{pad}" y="{top - 10}" font-family="sans-serif" '
             f'font-size="13" font-weight="bold">{title}</text>']
    span = width - label_w - 60
    for i, (name, val) in enumerate(zip(names, values)):
        y = top + i * (bar_height + pad)
        w = abs(val) / vmax * span
        color = "#4878a8" if val >= 0 else "#c05850"
        parts.append(f'<text x="{label_w - pad}" y="{y + bar_height - 5}" '
                     f'text-anchor="end" font-family="sans-serif" font-size="11">{name}</text>')
        parts.append(f'<rect x="{label_w}" y="{y}" width="{w:.1f}" '
                     f'height="{bar_height}" fill="{color}"/>')
        parts.append(f'<text x="{label_w + w + 4:.1f}" y="{y + bar_height - 5}" '
                     f'font-family="sans-serif" font-size="11">{val:.3f}</text>')
    parts.append("</svg>")
    return "\n".join(parts)
