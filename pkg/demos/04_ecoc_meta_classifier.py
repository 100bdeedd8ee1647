"""Walkthrough: coding matrices, the error-correcting property, and ECOC
against its own base learner."""

import itertools

import numpy as np

from riskforge import (ClassifierSpec, Dataset, fit, fit_ecoc, hamming_distance,
                       make_dense_random, make_one_vs_all, make_one_vs_one,
                       predict_ecoc, score_ecoc, train_test_split)
from riskforge.dataset import apply_standardizer, fit_standardizer
from riskforge.ecoc import decode_hamming

# The three coding schemes for a four-class problem.
for matrix in (make_one_vs_all(4), make_one_vs_one(4), make_dense_random(4, 7, seed=2)):
    print(f"{matrix.scheme}: {matrix.k} classes x {matrix.n_columns} columns, "
          f"min row distance {matrix.min_row_distance()}")
    print(matrix.entries)

# Error correction by brute force: with min distance d, any floor((d-1)/2)
# bit flips still decode to the right class.
matrix = make_dense_random(4, 7, seed=2)
d = matrix.min_row_distance()
t = int((d - 1) // 2)
worst_ok = True
for c in range(4):
    for positions in itertools.combinations(range(7), t):
        corrupted = matrix.entries[c].astype(float)
        corrupted[list(positions)] *= -1
        worst_ok &= decode_hamming(matrix, corrupted)[0] == c
print(f"\nall {t}-bit corruptions of every codeword decode correctly: {worst_ok}")

# ECOC over a weak base learner on overlapping blobs.
rng = np.random.default_rng(8)
k, p = 4, 6
centers = rng.normal(0, 1.8, size=(k, p))
y = np.repeat(np.arange(k), 150)
X = centers[y] + rng.normal(0, 1.5, size=(y.size, p))
data = Dataset(X, [f"x{i}" for i in range(p)], y, ["Low", "Medium", "High", "Highest"])
train, test = train_test_split(data, 0.7, seed=4)
stats = fit_standardizer(train)
train_std = apply_standardizer(train, stats)
test_std = apply_standardizer(test, stats)

base = ClassifierSpec("DT", {"max_depth": 4}, seed=0)
plain = fit(base, train_std)
plain_acc = np.mean(plain.predict(test_std.features) == test_std.labels)
print(f"\nplain DT accuracy:      {plain_acc:.4f}")
for maker in (make_one_vs_all, make_one_vs_one):
    ecoc = fit_ecoc(base, maker(k), train_std)
    acc = np.mean(predict_ecoc(ecoc, test_std.features) == test_std.labels)
    soft = score_ecoc(ecoc, test_std.features)
    print(f"ECOC {maker(k).scheme:11s} accuracy: {acc:.4f} "
          f"(soft rows sum to one: {bool(np.allclose(soft.sum(axis=1), 1.0))})")
