"""Walkthrough: ingest a ratings CSV, map grades to risk buckets, standardize,
and build deterministic stratified partitions."""

import os
import tempfile

import numpy as np

from riskforge import (RatingMap, apply_standardizer, fit_standardizer, load_csv,
                       relabel, stratified_k_fold, train_test_split)
from riskforge.dataset import sector_exempt_columns
from synth import write_synthetic_ratings

workdir = tempfile.mkdtemp(prefix="riskforge-demo-")
csv_path = os.path.join(workdir, "ratings.csv")
write_synthetic_ratings(csv_path, n_rows=500, seed=1)
print(f"wrote {csv_path}")

# Raw load: the rating column is withheld; its distinct strings become the
# provisional classes, ready for bucket mapping.
raw = load_csv(csv_path)
print(f"loaded n={raw.n} rows, p={raw.p} features")
print(f"agency grades seen: {raw.class_names}")

# The shipped default map folds agency grades into four risk buckets.
data = relabel(raw, RatingMap.default())
counts = np.bincount(data.labels, minlength=data.k)
print("bucket sizes:", dict(zip(data.class_names, counts.tolist())))

# 70/30 split, stratified per bucket, deterministic under the seed.
train, test = train_test_split(data, 0.7, seed=42)
print(f"train={train.n}, test={test.n}")
print("train bucket sizes:", np.bincount(train.labels, minlength=data.k).tolist())

# Standardize on training rows only; the integer-coded Sector column is exempt.
stats = fit_standardizer(train, sector_exempt_columns(train))
train_std = apply_standardizer(train, stats)
test_std = apply_standardizer(test, stats)
print("train feature means (should be ~0 except Sector):",
      np.round(train_std.features.mean(axis=0)[:4], 6).tolist())

# Stratified 3-fold assignment over the training side.
folds = stratified_k_fold(train, 3, seed=42)
for f in range(3):
    rows = folds.test_rows(f)
    print(f"fold {f}: {rows.size} rows, bucket mix "
          f"{np.bincount(train.labels[rows], minlength=data.k).tolist()}")
