"""L1-penalized least squares by cyclic coordinate descent, used as a
supervised feature selector.

The objective is RSS + penalty * sum(|coef|) with an unpenalized intercept.
Each coordinate update is the closed-form soft-threshold step; the intercept
is re-centered once per sweep. For one-vs-rest selection each class is coded
+1/-1, a shared penalty is chosen by cross-validated squared error over a
grid, and the final support is the union of the per-class supports.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, FoldAssignment

SUPPORT_TOL = 1e-10


def soft_threshold(z: float, gamma: float):
    """sign(z) * max(|z| - gamma, 0); gamma must be >= 0."""
    if gamma < 0:
        raise ValueError("gamma must be >= 0")
    return np.sign(z) * np.maximum(np.abs(z) - gamma, 0.0)


def critical_penalty(X, y) -> float:
    """Smallest penalty at which the all-zero coefficient vector is optimal.

    For the objective RSS + penalty * sum(|coef|) this is
    2 * max_j |x_j . (y - mean(y))| (the 2 comes from the squared-loss
    gradient).
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    resid = y - y.mean()
    return float(2.0 * np.max(np.abs(X.T @ resid))) if X.size else 0.0


@dataclass(frozen=True)
class LassoModel:
    coefficients: np.ndarray
    intercept: float
    penalty: float
    n_iterations: int
    converged: bool

    def predict(self, X) -> np.ndarray:
        return np.asarray(X, dtype=np.float64) @ self.coefficients + self.intercept

    def support(self, tol: float = SUPPORT_TOL) -> np.ndarray:
        return np.flatnonzero(np.abs(self.coefficients) > tol)


def _objective(r: np.ndarray, beta: np.ndarray, penalty: float) -> float:
    return float(r @ r + penalty * np.abs(beta).sum())


def fit_lasso(X, y, penalty: float, tol: float = 1e-7, max_iter: int = 10_000,
              beta0=None, debug: bool = False) -> LassoModel:
    """Cyclic coordinate descent for RSS + penalty * sum(|coef|).

    Terminates when the largest coefficient (or intercept) change in a sweep
    drops below `tol`. `beta0` provides a warm start along a penalty path.
    With `debug=True` the objective is asserted non-increasing every sweep.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise ValueError("X must be 2-D with one y per row")
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise ValueError("non-finite values in input")
    if penalty < 0:
        raise ValueError("penalty must be >= 0")
    n, p = X.shape
    cols = [np.ascontiguousarray(X[:, j]) for j in range(p)]
    col_sq = [float(c @ c) for c in cols]
    beta = np.zeros(p) if beta0 is None else np.asarray(beta0, dtype=np.float64).copy()
    intercept = float(np.mean(y - X @ beta))
    r = y - X @ beta - intercept
    half_penalty = 0.5 * penalty
    prev_obj = _objective(r, beta, penalty) if debug else None
    n_iter = 0
    converged = False
    for n_iter in range(1, max_iter + 1):
        max_delta = 0.0
        for j in range(p):
            if col_sq[j] == 0.0:
                continue
            xj = cols[j]
            old = float(beta[j])
            if old != 0.0:
                r += old * xj
            rho = float(xj @ r)
            # scalar soft-threshold, kept inline for speed
            if rho > half_penalty:
                new = (rho - half_penalty) / col_sq[j]
            elif rho < -half_penalty:
                new = (rho + half_penalty) / col_sq[j]
            else:
                new = 0.0
            if new != 0.0:
                r -= new * xj
            beta[j] = new
            delta = abs(new - old)
            if delta > max_delta:
                max_delta = delta
        shift = float(r.mean())
        intercept += shift
        r -= shift
        if abs(shift) > max_delta:
            max_delta = abs(shift)
        if debug:
            obj = _objective(r, beta, penalty)
            assert obj <= prev_obj + 1e-9, f"objective rose {prev_obj} -> {obj}"
            prev_obj = obj
        if max_delta < tol:
            converged = True
            break
    return LassoModel(beta, intercept, float(penalty), n_iter, converged)


def default_penalty_grid(X, targets, size: int = 50, span: float = 1e-3) -> np.ndarray:
    """Log-spaced grid from the critical penalty down to critical * span.

    `targets` is a (n, k) matrix of per-class +1/-1 codings; the grid top is
    the largest critical penalty across classes.
    """
    top = max(critical_penalty(X, targets[:, c]) for c in range(targets.shape[1]))
    if top <= 0:
        top = 1.0
    return np.geomspace(top, top * span, size)


@dataclass(frozen=True)
class FeatureSelection:
    """Union of one-vs-rest LASSO supports, with per-class detail."""

    selected: tuple[int, ...]
    per_class_supports: tuple[tuple[int, ...], ...]
    penalty_used: float
    feature_names: tuple[str, ...]
    class_names: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "lambda_used": self.penalty_used,
            "selected": [self.feature_names[i] for i in self.selected],
            "per_class": {self.class_names[c]: [self.feature_names[i] for i in sup]
                          for c, sup in enumerate(self.per_class_supports)},
        }

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=2)


def _ovr_targets(labels: np.ndarray, k: int) -> np.ndarray:
    t = -np.ones((labels.size, k))
    t[np.arange(labels.size), labels] = 1.0
    return t


def select_features(data: Dataset, penalty_grid=None, folds: FoldAssignment | None = None,
                    k_folds: int = 3, seed: int = 0, tol: float = 1e-7,
                    max_iter: int = 10_000) -> FeatureSelection:
    """One-vs-rest LASSO feature selection on standardized data.

    A single penalty shared by all classes is chosen to minimize the mean
    held-out squared error across folds and classes (ties resolved toward the
    larger penalty). Per-class supports come from refitting each class on the
    full data at the chosen penalty; the selection is their ascending union.
    """
    from .dataset import stratified_k_fold  # local import to avoid cycle noise

    if data.k < 2:
        raise ValueError("feature selection needs at least two classes")
    if folds is None:
        folds = stratified_k_fold(data, k_folds, seed)
    X = data.features
    targets = _ovr_targets(data.labels, data.k)
    grid = (default_penalty_grid(X, targets) if penalty_grid is None
            else np.asarray(sorted(penalty_grid, reverse=True), dtype=np.float64))
    if grid.size == 0:
        raise ValueError("penalty grid must be non-empty")
    grid = np.sort(grid)[::-1]  # descending for warm starts

    fold_sets = [(folds.train_rows(f), folds.test_rows(f)) for f in range(folds.k_folds)]
    warm = {}
    best_penalty, best_err = None, np.inf
    for penalty in grid:
        errs = []
        for f, (tr, te) in enumerate(fold_sets):
            for c in range(data.k):
                model = fit_lasso(X[tr], targets[tr, c], penalty, tol=tol,
                                  max_iter=max_iter, beta0=warm.get((f, c)))
                warm[(f, c)] = model.coefficients
                resid = targets[te, c] - model.predict(X[te])
                errs.append(float(np.mean(resid ** 2)))
        err = float(np.mean(errs))
        if err < best_err:  # strict: ties keep the larger (earlier) penalty
            best_err, best_penalty = err, float(penalty)

    supports = []
    for c in range(data.k):
        model = fit_lasso(X, targets[:, c], best_penalty, tol=tol, max_iter=max_iter)
        supports.append(tuple(int(i) for i in model.support()))
    selected = tuple(sorted(set().union(*supports)))
    if not selected:
        warnings.warn("LASSO selected no features (penalty grid too aggressive)",
                      RuntimeWarning, stacklevel=2)
    return FeatureSelection(selected, tuple(supports), best_penalty,
                            data.feature_names, data.class_names)


def restrict(data: Dataset, selection: FeatureSelection) -> Dataset:
    """Dataset with only the selected columns (ascending), labels unchanged."""
    idx = sorted(set(selection.selected))  # selections are ascending by invariant
    if not idx:
        raise ValueError("cannot restrict to an empty selection")
    if idx[0] < 0 or idx[-1] >= data.p:
        raise ValueError(f"selection index out of range for {data.p} columns")
    names = tuple(data.feature_names[i] for i in idx)
    return Dataset(data.features[:, idx], names, data.labels, data.class_names)
