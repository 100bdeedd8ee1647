"""Walkthrough: the six base learners behind one interface, compared with the
seven-metric report on a held-out split."""

import numpy as np

from riskforge import (ClassifierSpec, Dataset, evaluate, fit,
                       train_test_split)
from riskforge.dataset import apply_standardizer, fit_standardizer
from riskforge.metrics import TABLE_COLUMNS

rng = np.random.default_rng(3)
n_per, k, p = 120, 4, 8
centers = rng.normal(0, 2.2, size=(k, p))
y = np.repeat(np.arange(k), n_per)
X = centers[y] + rng.normal(0, 1.6, size=(y.size, p))
data = Dataset(X, [f"ratio_{i}" for i in range(p)], y,
               ["Low", "Medium", "High", "Highest"])

train, test = train_test_split(data, 0.7, seed=0)
stats = fit_standardizer(train)
train_std = apply_standardizer(train, stats)
test_std = apply_standardizer(test, stats)

print(f"{'model':6s} " + " ".join(f"{c:>18s}" for c in TABLE_COLUMNS))
for algo in ("DT", "RF", "GBT", "KNN", "SVM", "MLP"):
    model = fit(ClassifierSpec(algo, seed=1), train_std)
    report = evaluate(test_std.labels, model.predict(test_std.features),
                      model.score(test_std.features))
    print(f"{algo:6s} " + " ".join(f"{v:18.4f}" for v in report.to_csv_row())
          + f"   ({model.training_time:.2f}s fit)")

# every learner exposes normalized class scores; predict is their argmax
model = fit(ClassifierSpec("RF", {"n_trees": 50}, seed=1), train_std)
scores = model.score(test_std.features[:3])
print("\nRF score rows (vote fractions):")
print(np.round(scores, 3))
print("argmax == predict:",
      bool((scores.argmax(axis=1) == model.predict(test_std.features[:3])).all()))
