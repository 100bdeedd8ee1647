import numpy as np
import pytest

from riskforge.dataset import Dataset


def make_blobs(n_per_class: int, n_classes: int, n_features: int, spread: float = 0.5,
               center_scale: float = 3.0, seed: int = 0,
               n_noise: int = 0) -> Dataset:
    """Gaussian blobs, one center per class, plus optional pure-noise columns."""
    rng = np.random.default_rng(seed)
    centers = rng.normal(0.0, center_scale, size=(n_classes, n_features))
    y = np.repeat(np.arange(n_classes), n_per_class)
    X = centers[y] + rng.normal(0.0, spread, size=(y.size, n_features))
    if n_noise:
        X = np.hstack([X, rng.normal(0.0, 1.0, size=(y.size, n_noise))])
    names = [f"f{i}" for i in range(n_features)] + [f"noise{i}" for i in range(n_noise)]
    classes = [f"c{i}" for i in range(n_classes)]
    return Dataset(X, names, y, classes)


def standardized(data: Dataset) -> Dataset:
    from riskforge.dataset import apply_standardizer, fit_standardizer
    return apply_standardizer(data, fit_standardizer(data))


@pytest.fixture
def blobs3() -> Dataset:
    return make_blobs(40, 3, 5, seed=11)


@pytest.fixture
def blobs3_std(blobs3) -> Dataset:
    return standardized(blobs3)
