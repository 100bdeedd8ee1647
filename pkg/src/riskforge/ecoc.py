"""Error-correcting output codes: coding matrices, per-column binary
training, and nearest-codeword decoding.

Position costs follow (1 - a*b) / 2 over {-1, 0, +1} entries: agreeing
nonzero entries cost 0, disagreeing ones cost 1, and any zero (abstention)
costs 0.5. The same form handles soft decoding, where a column model's
class-1 probability maps to a margin in [-1, +1].
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from ._seeds import derive_seed
from .classifiers import ClassifierSpec, fit as fit_classifier
from .dataset import Dataset

SCHEMES = ("one_vs_all", "one_vs_one", "dense_random")


@dataclass(frozen=True)
class CodingMatrix:
    """k x L code table over {-1, 0, +1}; rows are class codewords."""

    entries: np.ndarray
    scheme: str

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=np.int8)
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if e.ndim != 2 or e.shape[0] < 2 or e.shape[1] < 1:
            raise ValueError(f"coding matrix must be (k >= 2, L >= 1), got {e.shape}")
        if not np.isin(e, (-1, 0, 1)).all():
            raise ValueError("entries must be in {-1, 0, +1}")
        if (e == 0).all(axis=1).any():
            raise ValueError("all-zero codeword row")
        if ((e == 1).sum(axis=0) < 1).any() or ((e == -1).sum(axis=0) < 1).any():
            raise ValueError("every column needs at least one +1 and one -1")
        for i in range(e.shape[0]):
            for j in range(i + 1, e.shape[0]):
                if (e[i] == e[j]).all():
                    raise ValueError(f"identical codeword rows {i} and {j}")
        if self.scheme == "dense_random":
            if (e == 0).any():
                raise ValueError("dense_random entries must be +/-1 only")
            for i in range(e.shape[1]):
                for j in range(i + 1, e.shape[1]):
                    if (e[:, i] == e[:, j]).all() or (e[:, i] == -e[:, j]).all():
                        raise ValueError(f"columns {i} and {j} identical or complementary")
        e = e.copy()
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def k(self) -> int:
        return self.entries.shape[0]

    @property
    def n_columns(self) -> int:
        return self.entries.shape[1]

    def min_row_distance(self) -> float:
        return min(hamming_distance(self.entries[i], self.entries[j])
                   for i in range(self.k) for j in range(i + 1, self.k))

    def to_json(self) -> dict:
        return {"scheme": self.scheme, "k": self.k, "L": self.n_columns,
                "rows": self.entries.tolist()}

    @classmethod
    def from_json(cls, doc: dict) -> "CodingMatrix":
        return cls(np.array(doc["rows"], dtype=np.int8), doc["scheme"])

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=2)

    @classmethod
    def load(cls, path) -> "CodingMatrix":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def make_one_vs_all(k: int) -> CodingMatrix:
    """Column j: +1 for class j, -1 for the rest."""
    if k < 2:
        raise ValueError("one-vs-all needs k >= 2")
    e = -np.ones((k, k), dtype=np.int8)
    np.fill_diagonal(e, 1)
    return CodingMatrix(e, "one_vs_all")


def make_one_vs_one(k: int) -> CodingMatrix:
    """One column per class pair (i, j), i < j, in lexicographic order."""
    if k < 2:
        raise ValueError("one-vs-one needs k >= 2")
    cols = [(i, j) for i in range(k) for j in range(i + 1, k)]
    e = np.zeros((k, len(cols)), dtype=np.int8)
    for col, (i, j) in enumerate(cols):
        e[i, col] = 1
        e[j, col] = -1
    return CodingMatrix(e, "one_vs_one")


def make_dense_random(k: int, n_columns: int, seed: int,
                      max_attempts: int = 50) -> CodingMatrix:
    """Best valid +/-1 matrix (by minimum pairwise row distance) out of
    `max_attempts` seeded rejection samples.

    Columns are rejection-sampled one at a time (skipping single-sign columns
    and any identical or complementary to an accepted one), since for small k
    whole-matrix sampling almost never satisfies the column constraints.
    """
    if k < 2:
        raise ValueError("dense_random needs k >= 2")
    if n_columns < int(np.ceil(np.log2(k))):
        raise ValueError(f"need at least ceil(log2({k})) columns")
    rng = np.random.default_rng(derive_seed(seed, "dense_random", k, n_columns))
    signs = np.array([-1, 1], dtype=np.int8)
    best = None
    best_dist = -1.0
    for _ in range(max_attempts):
        cols: list[np.ndarray] = []
        budget = 200 * n_columns
        while len(cols) < n_columns and budget > 0:
            budget -= 1
            col = rng.choice(signs, size=k)
            if (col == col[0]).all():
                continue
            if any((col == c).all() or (col == -c).all() for c in cols):
                continue
            cols.append(col)
        if len(cols) < n_columns:
            continue
        try:
            matrix = CodingMatrix(np.stack(cols, axis=1), "dense_random")
        except ValueError:  # duplicate/all-equal rows can still slip through
            continue
        dist = matrix.min_row_distance()
        if dist > best_dist:
            best, best_dist = matrix, dist
    if best is None:
        raise ValueError(f"no valid {k}x{n_columns} dense code in {max_attempts} attempts")
    return best


def hamming_distance(a, b) -> float:
    """Sum over positions of (1 - a*b)/2 for entries in {-1, 0, +1}."""
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape[0]} vs {b.shape[0]}")
    for v in (a, b):
        if not np.isin(v, (-1.0, 0.0, 1.0)).all():
            raise ValueError("entries must be in {-1, 0, +1}")
    return float(np.sum(1.0 - a * b) / 2.0)


def _distances(margins: np.ndarray, matrix: CodingMatrix) -> np.ndarray:
    """(m, k) decoding distances for margin rows in [-1, +1]^L."""
    codes = matrix.entries.astype(np.float64)
    return (matrix.n_columns - margins @ codes.T) / 2.0


def decode_hamming(matrix: CodingMatrix, votes: np.ndarray) -> np.ndarray:
    """Nearest codeword per +/-1 vote row; ties toward the lowest class."""
    votes = np.atleast_2d(np.asarray(votes, dtype=np.float64))
    if votes.shape[1] != matrix.n_columns:
        raise ValueError("vote length does not match code length")
    return np.argmin(_distances(votes, matrix), axis=1).astype(np.int64)


@dataclass(frozen=True)
class EcocModel:
    """One trained binary learner per coding-matrix column."""

    matrix: CodingMatrix
    column_models: tuple
    base_spec: ClassifierSpec

    @property
    def n_classes(self) -> int:
        return self.matrix.k

    @property
    def n_features(self) -> int:
        return self.column_models[0].n_features

    def predict(self, X) -> np.ndarray:
        return predict_ecoc(self, X)

    def score(self, X) -> np.ndarray:
        return score_ecoc(self, X)


def fit_ecoc(base: ClassifierSpec, matrix: CodingMatrix, train: Dataset) -> EcocModel:
    """Train one binary learner per column on the rows its column retains.

    Rows whose class has entry 0 are dropped; entry +1 maps to binary class 1
    and entry -1 to binary class 0. Column seeds derive from the base seed
    and column index.
    """
    if matrix.k != train.k:
        raise ValueError(f"coding matrix has {matrix.k} rows but data has {train.k} classes")
    models = []
    for col in range(matrix.n_columns):
        entry = matrix.entries[train.labels, col]
        mask = entry != 0
        y_bin = (entry[mask] > 0).astype(np.int64)
        if np.unique(y_bin).size < 2:
            raise ValueError(f"column {col} yields a single-class subproblem on this data")
        sub = Dataset(train.features[mask], train.feature_names, y_bin,
                      ("code_neg", "code_pos"))
        models.append(fit_classifier(replace(base, seed=derive_seed(base.seed, "ecoc", col)),
                                     sub))
    return EcocModel(matrix, tuple(models), base)


def predict_ecoc(model: EcocModel, X) -> np.ndarray:
    """Hard decoding: +/-1 votes from each column model, nearest codeword."""
    X = np.asarray(X, dtype=np.float64)
    if X.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    votes = np.empty((X.shape[0], model.matrix.n_columns))
    for col, column_model in enumerate(model.column_models):
        votes[:, col] = 2.0 * column_model.predict(X) - 1.0
    return decode_hamming(model.matrix, votes)


def score_ecoc(model: EcocModel, X) -> np.ndarray:
    """Soft decoding: softmax(-distance) over real-valued column margins."""
    X = np.asarray(X, dtype=np.float64)
    if X.shape[0] == 0:
        return np.zeros((0, model.matrix.k))
    margins = np.empty((X.shape[0], model.matrix.n_columns))
    for col, column_model in enumerate(model.column_models):
        margins[:, col] = 2.0 * column_model.score(X)[:, 1] - 1.0
    d = _distances(margins, model.matrix)
    from .classifiers import softmax
    return softmax(-d)
