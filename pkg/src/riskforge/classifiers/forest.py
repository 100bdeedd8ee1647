"""Random forest: bootstrapped Gini trees with sqrt(p) features per split.

Each tree derives its own seed from the master seed and tree index, so the
ensemble is identical no matter how tree training is scheduled. Scores are
hard-vote proportions across trees.
"""

from __future__ import annotations

import numpy as np

from .._seeds import derive_seed
from ..dataset import Dataset
from ._tree import FlatTree, grow_classification_tree
from .base import ClassifierSpec, FittedClassifier, argmax_lowest


class RandomForest(FittedClassifier):
    algorithm = "RF"

    def __init__(self, spec, n_classes, n_features, trees: list[FlatTree]):
        super().__init__(spec, n_classes, n_features)
        self.trees = trees

    @classmethod
    def fit_dataset(cls, spec: ClassifierSpec, train: Dataset) -> "RandomForest":
        n, p = train.n, train.p
        m_try = max(1, int(np.sqrt(p)))
        trees = []
        for i in range(spec.params["n_trees"]):
            rng = np.random.default_rng(derive_seed(spec.seed, "tree", i))
            boot = rng.integers(0, n, size=n)
            trees.append(grow_classification_tree(
                train.features[boot], train.labels[boot], train.k,
                max_depth=spec.params["max_depth"],
                min_samples_leaf=spec.params["min_samples_leaf"],
                max_features=m_try, rng=rng))
        return cls(spec, train.k, p, trees)

    def _score(self, X: np.ndarray) -> np.ndarray:
        votes = np.zeros((X.shape[0], self.n_classes))
        rows = np.arange(X.shape[0])
        for tree in self.trees:
            votes[rows, argmax_lowest(tree.predict_value(X))] += 1.0
        return votes / len(self.trees)

    def _state(self) -> dict:
        return {"trees": [t.to_state() for t in self.trees]}

    @classmethod
    def _from_state(cls, spec, n_classes, n_features, state):
        return cls(spec, n_classes, n_features,
                   [FlatTree.from_state(s) for s in state["trees"]])
