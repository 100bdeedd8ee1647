"""Six from-scratch base learners behind one train/predict/score interface."""

from .base import (ALGORITHMS, DEFAULT_PARAMS, ClassifierSpec, FittedClassifier,
                   argmax_lowest, fit, load_model, model_from_blob, predict,
                   save_model, score, softmax)
from .boosting import GradientBoostedTrees
from .forest import RandomForest
from .knn import KNearestNeighbors
from .mlp import MultilayerPerceptron
from .svm import LinearSVM
from .tree import DecisionTree

__all__ = [
    "ALGORITHMS", "DEFAULT_PARAMS", "ClassifierSpec", "FittedClassifier",
    "argmax_lowest", "fit", "predict", "score", "softmax",
    "save_model", "load_model", "model_from_blob",
    "DecisionTree", "RandomForest", "GradientBoostedTrees",
    "KNearestNeighbors", "LinearSVM", "MultilayerPerceptron",
]
