"""Linear one-vs-rest SVM trained by hinge-loss SGD with a 1/(reg*t) step.

The bias is realized as an appended constant feature sharing the L2 penalty,
which keeps the decaying step schedule stable. Scores are the softmax of the
per-class margins.
"""

from __future__ import annotations

import numpy as np

from .._seeds import derive_seed
from ..dataset import Dataset
from .base import ClassifierSpec, FittedClassifier, softmax


def _pegasos(Xa: np.ndarray, y_signed: np.ndarray, reg: float, n_epochs: int,
             rng: np.random.Generator) -> np.ndarray:
    n, d = Xa.shape
    w = np.zeros(d)
    t = 0
    for _ in range(n_epochs):
        for i in rng.permutation(n):
            t += 1
            eta = 1.0 / (reg * t)
            margin = y_signed[i] * (w @ Xa[i])
            w *= 1.0 - eta * reg
            if margin < 1.0:
                w += (eta * y_signed[i]) * Xa[i]
    return w


class LinearSVM(FittedClassifier):
    algorithm = "SVM"

    def __init__(self, spec, n_classes, n_features, weights: np.ndarray):
        super().__init__(spec, n_classes, n_features)
        self.weights = np.asarray(weights, dtype=np.float64)  # (k, p + 1)

    @classmethod
    def fit_dataset(cls, spec: ClassifierSpec, train: Dataset) -> "LinearSVM":
        Xa = np.hstack([train.features, np.ones((train.n, 1))])
        reg = spec.params["regularization"]
        epochs = spec.params["n_epochs"]
        weights = np.empty((train.k, train.p + 1))
        for c in range(train.k):
            y_signed = np.where(train.labels == c, 1.0, -1.0)
            rng = np.random.default_rng(derive_seed(spec.seed, "ovr", c))
            weights[c] = _pegasos(Xa, y_signed, reg, epochs, rng)
        return cls(spec, train.k, train.p, weights)

    def margins(self, X: np.ndarray) -> np.ndarray:
        Xa = np.hstack([X, np.ones((X.shape[0], 1))])
        return Xa @ self.weights.T

    def _score(self, X: np.ndarray) -> np.ndarray:
        return softmax(self.margins(X))

    def _state(self) -> dict:
        return {"weights": self.weights.tolist()}

    @classmethod
    def _from_state(cls, spec, n_classes, n_features, state):
        return cls(spec, n_classes, n_features, np.array(state["weights"]))
