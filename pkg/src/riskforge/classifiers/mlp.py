"""Single-hidden-layer perceptron: tanh hidden units, softmax output,
cross-entropy loss, mini-batch SGD.

Weights initialize Uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)) from the spec
seed; biases start at zero. `loss_and_gradients` exposes the analytic
backpropagation gradients so they can be checked against finite differences.
"""

from __future__ import annotations

import numpy as np

from .._seeds import derive_seed
from ..dataset import Dataset
from .base import ClassifierSpec, FittedClassifier, softmax


def init_params(n_features: int, hidden: int, n_classes: int,
                rng: np.random.Generator) -> dict:
    lim1 = 1.0 / np.sqrt(n_features)
    lim2 = 1.0 / np.sqrt(hidden)
    return {
        "W1": rng.uniform(-lim1, lim1, size=(n_features, hidden)),
        "b1": np.zeros(hidden),
        "W2": rng.uniform(-lim2, lim2, size=(hidden, n_classes)),
        "b2": np.zeros(n_classes),
    }


def forward(params: dict, X: np.ndarray):
    hidden = np.tanh(X @ params["W1"] + params["b1"])
    probs = softmax(hidden @ params["W2"] + params["b2"])
    return hidden, probs


def loss_and_gradients(params: dict, X: np.ndarray, y_onehot: np.ndarray):
    """Mean cross-entropy and its gradients w.r.t. all four parameter arrays."""
    m = X.shape[0]
    hidden, probs = forward(params, X)
    loss = float(-np.sum(y_onehot * np.log(np.clip(probs, 1e-300, None))) / m)
    d_logits = (probs - y_onehot) / m
    d_hidden = (d_logits @ params["W2"].T) * (1.0 - hidden ** 2)
    grads = {
        "W2": hidden.T @ d_logits,
        "b2": d_logits.sum(axis=0),
        "W1": X.T @ d_hidden,
        "b1": d_hidden.sum(axis=0),
    }
    return loss, grads


class MultilayerPerceptron(FittedClassifier):
    algorithm = "MLP"

    def __init__(self, spec, n_classes, n_features, params: dict):
        super().__init__(spec, n_classes, n_features)
        self.net = params

    @classmethod
    def fit_dataset(cls, spec: ClassifierSpec, train: Dataset) -> "MultilayerPerceptron":
        p = spec.params
        rng = np.random.default_rng(derive_seed(spec.seed, "mlp"))
        net = init_params(train.p, p["hidden_units"], train.k, rng)
        onehot = np.zeros((train.n, train.k))
        onehot[np.arange(train.n), train.labels] = 1.0
        lr, batch = p["learning_rate"], p["batch_size"]
        for _ in range(p["n_epochs"]):
            order = rng.permutation(train.n)
            for start in range(0, train.n, batch):
                idx = order[start:start + batch]
                _, grads = loss_and_gradients(net, train.features[idx], onehot[idx])
                for key in net:
                    net[key] -= lr * grads[key]
        return cls(spec, train.k, train.p, net)

    def _score(self, X: np.ndarray) -> np.ndarray:
        _, probs = forward(self.net, X)
        return probs

    def _state(self) -> dict:
        return {key: val.tolist() for key, val in self.net.items()}

    @classmethod
    def _from_state(cls, spec, n_classes, n_features, state):
        return cls(spec, n_classes, n_features,
                   {key: np.array(val) for key, val in state.items()})
