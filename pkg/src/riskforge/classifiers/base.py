"""Uniform train/predict/score interface over the six base learners."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, replace

import numpy as np

from ..dataset import Dataset

ALGORITHMS = ("DT", "RF", "GBT", "KNN", "SVM", "MLP")

MODEL_FORMAT = "riskforge-model"
MODEL_VERSION = 1

DEFAULT_PARAMS: dict[str, dict] = {
    "DT": {"max_depth": 12, "min_samples_leaf": 2},
    "RF": {"n_trees": 200, "max_depth": None, "min_samples_leaf": 1},
    "GBT": {"n_rounds": 150, "learning_rate": 0.1, "max_depth": 4,
            "min_samples_leaf": 1, "track_loss": False, "debug": False},
    "KNN": {"n_neighbors": 5},
    "SVM": {"regularization": 1e-3, "n_epochs": 50},
    "MLP": {"hidden_units": 64, "learning_rate": 0.01, "batch_size": 32,
            "n_epochs": 200},
}

_POSITIVE_INT = {"max_depth", "min_samples_leaf", "n_trees", "n_rounds",
                 "n_neighbors", "n_epochs", "hidden_units", "batch_size"}
_POSITIVE_REAL = {"learning_rate", "regularization"}


@dataclass(frozen=True)
class ClassifierSpec:
    """Algorithm tag + hyperparameter overrides + master seed."""

    algorithm: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; "
                             f"expected one of {ALGORITHMS}")
        merged = {**DEFAULT_PARAMS[self.algorithm], **self.params}
        unknown = set(self.params) - set(DEFAULT_PARAMS[self.algorithm])
        if unknown:
            raise ValueError(f"unknown {self.algorithm} parameters: {sorted(unknown)}")
        for key, val in merged.items():
            if key in _POSITIVE_INT:
                if key == "max_depth" and val is None:
                    continue
                if not isinstance(val, (int, np.integer)) or val < 1:
                    raise ValueError(f"{self.algorithm}.{key} must be an integer >= 1")
            elif key in _POSITIVE_REAL:
                if not val > 0:
                    raise ValueError(f"{self.algorithm}.{key} must be > 0")
        object.__setattr__(self, "params", dict(merged))

    def with_seed(self, seed: int) -> "ClassifierSpec":
        return replace(self, seed=int(seed))


def argmax_lowest(scores: np.ndarray) -> np.ndarray:
    """Row-wise argmax breaking exact ties toward the lowest class index."""
    return np.argmax(scores, axis=1).astype(np.int64)  # np.argmax returns first max


class FittedClassifier:
    """Trained model exposing label prediction and per-class scores.

    Subclasses implement `_score(X)`; prediction is always the score argmax
    with low-index tie-break, so the interface law holds by construction.
    Instances are immutable after fit and safe to share across threads.
    """

    algorithm: str = ""

    def __init__(self, spec: ClassifierSpec, n_classes: int, n_features: int):
        self.spec = spec
        self.n_classes = int(n_classes)
        self.n_features = int(n_features)
        self.training_time = 0.0

    def _check(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ValueError(f"expected (m, {self.n_features}) inputs, got {X.shape}")
        return X

    def score(self, X) -> np.ndarray:
        """(m, k) score matrix; rows are finite and sum to 1."""
        X = self._check(X)
        if X.shape[0] == 0:
            return np.zeros((0, self.n_classes))
        return self._score(X)

    def predict(self, X) -> np.ndarray:
        X = self._check(X)
        if X.shape[0] == 0:
            return np.zeros(0, dtype=np.int64)
        return argmax_lowest(self._score(X))

    def _score(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    # -- serialization ------------------------------------------------------
    def _state(self) -> dict:
        raise NotImplementedError

    @classmethod
    def _from_state(cls, spec, n_classes, n_features, state) -> "FittedClassifier":
        raise NotImplementedError

    def to_blob(self) -> dict:
        return {
            "format": MODEL_FORMAT,
            "version": MODEL_VERSION,
            "algorithm": self.algorithm,
            "params": _jsonable(self.spec.params),
            "seed": self.spec.seed,
            "n_classes": self.n_classes,
            "n_features": self.n_features,
            "training_time": self.training_time,
            "state": self._state(),
        }


def softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def _jsonable(params: dict) -> dict:
    out = {}
    for key, val in params.items():
        if isinstance(val, np.integer):
            val = int(val)
        elif isinstance(val, np.floating):
            val = float(val)
        out[key] = val
    return out


def _registry() -> dict:
    from .tree import DecisionTree
    from .forest import RandomForest
    from .boosting import GradientBoostedTrees
    from .knn import KNearestNeighbors
    from .svm import LinearSVM
    from .mlp import MultilayerPerceptron
    return {"DT": DecisionTree, "RF": RandomForest, "GBT": GradientBoostedTrees,
            "KNN": KNearestNeighbors, "SVM": LinearSVM, "MLP": MultilayerPerceptron}


def fit(spec: ClassifierSpec, train: Dataset) -> FittedClassifier:
    """Train the learner named by the spec; deterministic given (spec, train)."""
    if train.n == 0:
        raise ValueError("cannot fit on empty training data")
    if train.k < 2:
        raise ValueError("training data has a single class")
    cls = _registry()[spec.algorithm]
    start = time.perf_counter()
    model = cls.fit_dataset(spec, train)
    model.training_time = time.perf_counter() - start
    return model


def predict(model, X) -> np.ndarray:
    return model.predict(X)


def score(model, X) -> np.ndarray:
    return model.score(X)


def save_model(model: FittedClassifier, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model.to_blob(), fh)


def model_from_blob(blob: dict) -> FittedClassifier:
    if blob.get("format") != MODEL_FORMAT:
        raise ValueError("not a model blob")
    if blob.get("version") != MODEL_VERSION:
        raise ValueError(f"unsupported model version {blob.get('version')}")
    cls = _registry()[blob["algorithm"]]
    spec = ClassifierSpec(blob["algorithm"], blob["params"], blob["seed"])
    model = cls._from_state(spec, blob["n_classes"], blob["n_features"], blob["state"])
    model.training_time = float(blob.get("training_time", 0.0))
    return model


def load_model(path) -> FittedClassifier:
    with open(path, encoding="utf-8") as fh:
        return model_from_blob(json.load(fh))
