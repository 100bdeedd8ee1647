"""Gradient-boosted trees: one-vs-all additive regression trees on the
softmax cross-entropy gradient, with shrinkage.

Each round fits one depth-limited variance-reduction tree per class to the
residual (one_hot - softmax(F)) and adds learning_rate times its prediction
to that class's additive score. Class scores are softmax(F).
"""

from __future__ import annotations

import numpy as np

from ..dataset import Dataset
from ._tree import FlatTree, grow_regression_tree
from .base import ClassifierSpec, FittedClassifier, softmax


def _cross_entropy(F: np.ndarray, y: np.ndarray) -> float:
    probs = softmax(F)
    return float(-np.mean(np.log(np.clip(probs[np.arange(y.size), y], 1e-300, None))))


class GradientBoostedTrees(FittedClassifier):
    algorithm = "GBT"

    def __init__(self, spec, n_classes, n_features, rounds: list[list[FlatTree]],
                 train_losses=None):
        super().__init__(spec, n_classes, n_features)
        self.rounds = rounds  # rounds[r][c] is round r's tree for class c
        self.train_losses = train_losses

    @classmethod
    def fit_dataset(cls, spec: ClassifierSpec, train: Dataset) -> "GradientBoostedTrees":
        params = spec.params
        X, y, k = train.features, train.labels, train.k
        onehot = np.zeros((train.n, k))
        onehot[np.arange(train.n), y] = 1.0
        F = np.zeros((train.n, k))
        lr = params["learning_rate"]
        track = params["track_loss"] or params["debug"]
        losses = [_cross_entropy(F, y)] if track else None
        rounds = []
        for _ in range(params["n_rounds"]):
            residual = onehot - softmax(F)
            round_trees = []
            for c in range(k):
                tree = grow_regression_tree(X, residual[:, c],
                                            max_depth=params["max_depth"],
                                            min_samples_leaf=params["min_samples_leaf"])
                F[:, c] += lr * tree.predict_value(X)[:, 0]
                round_trees.append(tree)
            rounds.append(round_trees)
            if track:
                losses.append(_cross_entropy(F, y))
                if params["debug"]:
                    assert losses[-1] <= losses[-2] + 1e-9, \
                        f"training loss rose {losses[-2]} -> {losses[-1]}"
        return cls(spec, k, train.p, rounds, losses)

    def _raw_scores(self, X: np.ndarray) -> np.ndarray:
        F = np.zeros((X.shape[0], self.n_classes))
        lr = self.spec.params["learning_rate"]
        for round_trees in self.rounds:
            for c, tree in enumerate(round_trees):
                F[:, c] += lr * tree.predict_value(X)[:, 0]
        return F

    def _score(self, X: np.ndarray) -> np.ndarray:
        return softmax(self._raw_scores(X))

    def _state(self) -> dict:
        return {"rounds": [[t.to_state() for t in rnd] for rnd in self.rounds]}

    @classmethod
    def _from_state(cls, spec, n_classes, n_features, state):
        rounds = [[FlatTree.from_state(s) for s in rnd] for rnd in state["rounds"]]
        return cls(spec, n_classes, n_features, rounds)
