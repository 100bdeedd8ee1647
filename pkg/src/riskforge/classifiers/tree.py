"""CART decision tree with Gini impurity."""

from __future__ import annotations

import numpy as np

from ..dataset import Dataset
from ._tree import FlatTree, grow_classification_tree
from .base import ClassifierSpec, FittedClassifier


class DecisionTree(FittedClassifier):
    algorithm = "DT"

    def __init__(self, spec, n_classes, n_features, tree: FlatTree):
        super().__init__(spec, n_classes, n_features)
        self.tree = tree

    @classmethod
    def fit_dataset(cls, spec: ClassifierSpec, train: Dataset) -> "DecisionTree":
        tree = grow_classification_tree(
            train.features, train.labels, train.k,
            max_depth=spec.params["max_depth"],
            min_samples_leaf=spec.params["min_samples_leaf"])
        return cls(spec, train.k, train.p, tree)

    def _score(self, X: np.ndarray) -> np.ndarray:
        return self.tree.predict_value(X)

    def _state(self) -> dict:
        return {"tree": self.tree.to_state()}

    @classmethod
    def _from_state(cls, spec, n_classes, n_features, state):
        return cls(spec, n_classes, n_features, FlatTree.from_state(state["tree"]))
