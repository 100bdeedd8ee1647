"""k-nearest neighbors on Euclidean distance over standardized features.

Distance ties resolve toward the lower training-row index (stable sort), and
scores are the neighbor vote fractions.
"""

from __future__ import annotations

import numpy as np

from ..dataset import Dataset
from .base import ClassifierSpec, FittedClassifier


class KNearestNeighbors(FittedClassifier):
    algorithm = "KNN"

    def __init__(self, spec, n_classes, n_features, X: np.ndarray, y: np.ndarray):
        super().__init__(spec, n_classes, n_features)
        self.train_X = np.asarray(X, dtype=np.float64)
        self.train_y = np.asarray(y, dtype=np.int64)

    @classmethod
    def fit_dataset(cls, spec: ClassifierSpec, train: Dataset) -> "KNearestNeighbors":
        if spec.params["n_neighbors"] > train.n:
            raise ValueError(f"n_neighbors={spec.params['n_neighbors']} exceeds "
                             f"{train.n} training rows")
        return cls(spec, train.k, train.p, train.features, train.labels)

    def _score(self, X: np.ndarray) -> np.ndarray:
        k_nn = self.spec.params["n_neighbors"]
        sq_train = (self.train_X ** 2).sum(axis=1)
        sq_query = (X ** 2).sum(axis=1)
        d2 = sq_query[:, None] + sq_train[None, :] - 2.0 * (X @ self.train_X.T)
        np.maximum(d2, 0.0, out=d2)
        order = np.argsort(d2, axis=1, kind="stable")[:, :k_nn]
        votes = np.zeros((X.shape[0], self.n_classes))
        rows = np.repeat(np.arange(X.shape[0]), k_nn)
        np.add.at(votes, (rows, self.train_y[order].ravel()), 1.0)
        return votes / k_nn

    def _state(self) -> dict:
        return {"X": self.train_X.tolist(), "y": self.train_y.tolist()}

    @classmethod
    def _from_state(cls, spec, n_classes, n_features, state):
        return cls(spec, n_classes, n_features,
                   np.array(state["X"]), np.array(state["y"]))
