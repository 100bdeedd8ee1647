"""Walkthrough: the config-driven experiment grid end to end, i.e. what
`riskforge run --config ...` does in batch."""

import os
import tempfile

from riskforge import emit_report, parse_config, run_all
from synth import write_synthetic_ratings

workdir = tempfile.mkdtemp(prefix="riskforge-demo-")
csv_path = os.path.join(workdir, "ratings.csv")
write_synthetic_ratings(csv_path, n_rows=600, seed=9)

config_path = os.path.join(workdir, "experiment.cfg")
with open(config_path, "w", encoding="utf-8") as fh:
    fh.write(f"""\
# four pipeline variants over two fast learners
dataset = {csv_path}
rating_map = default
seed = 11
k_folds = 3
train_fraction = 0.7
classifiers = DT, GBT
variants = baseline, ecoc, lasso, lasso_ecoc
ecoc_scheme = one_vs_all
pfi_repeats = 10
output_dir = {os.path.join(workdir, "out")}
formats = csv, json, svg
dt.max_depth = 8
gbt.n_rounds = 40
""")
print(f"config: {config_path}")

config = parse_config(config_path)
report = run_all(config)
written = emit_report(report, config.output_dir, config.formats)
print("artifacts:")
for path in written:
    print("  " + path)

print(f"\n{'variant':11s} {'model':5s} {'cv acc':>8s} {'holdout':>8s} "
      f"{'features':>8s} {'cv time':>8s}")
for cell in report.cells:
    holdout = cell.holdout_metrics.accuracy if cell.holdout_metrics else float("nan")
    print(f"{cell.variant:11s} {cell.classifier:5s} {cell.cv_mean_score:8.4f} "
          f"{holdout:8.4f} {cell.feature_count_used:8d} "
          f"{cell.cv_time_seconds:7.2f}s")

table = report.importance
print(f"\nimportance source: best baseline model = {report.importance_classifier}")
top = sorted(range(len(table.feature_names)),
             key=lambda j: -table.global_importance[j])[:5]
for j in top:
    print(f"  {table.feature_names[j]:35s} {table.global_importance[j]:+.4f}")
