"""riskforge: multiclass credit-risk classification toolkit.

Library layers: `dataset` (ingestion, rating buckets, standardization,
stratified splits), `lasso` (coordinate-descent feature selection),
`classifiers` (six from-scratch base learners), `ecoc` (error-correcting
output codes meta-classifier), `metrics` (seven-metric evaluation), `pfi`
(permutation feature importance), and `experiment` (the config-driven
variant x classifier grid behind the `riskforge` command).
"""

__version__ = "0.1.0"

from .dataset import (ClipStats, Dataset, DataError, FoldAssignment, RatingMap,
                      StandardizationStats, apply_clipper, apply_standardizer,
                      fit_clipper, fit_standardizer, load_csv, load_dataset,
                      map_ratings, relabel, save_csv, stratified_k_fold,
                      train_test_split)
from .lasso import (FeatureSelection, LassoModel, critical_penalty, fit_lasso,
                    restrict, select_features, soft_threshold)
from .classifiers import ClassifierSpec, FittedClassifier, fit, predict, score
from .ecoc import (CodingMatrix, EcocModel, fit_ecoc, hamming_distance,
                   make_dense_random, make_one_vs_all, make_one_vs_one,
                   predict_ecoc, score_ecoc)
from .metrics import (ConfusionMatrix, MetricReport, basic_metrics, cohen_kappa,
                      confusion, evaluate, roc_auc_ovr_mean)
from .pfi import (ImportanceTable, importance_table, per_class_importance,
                  permutation_importance, rank_features)
from .experiment import (ConfigError, ExperimentConfig, PipelineModel, RunReport,
                         emit_report, parse_config, run_all, run_variant)

__all__ = [
    "__version__",
    "ClipStats", "Dataset", "DataError", "FoldAssignment", "RatingMap",
    "StandardizationStats", "apply_clipper", "apply_standardizer", "fit_clipper",
    "fit_standardizer", "load_csv", "load_dataset", "map_ratings", "relabel",
    "save_csv", "stratified_k_fold", "train_test_split",
    "FeatureSelection", "LassoModel", "critical_penalty", "fit_lasso", "restrict",
    "select_features", "soft_threshold",
    "ClassifierSpec", "FittedClassifier", "fit", "predict", "score",
    "CodingMatrix", "EcocModel", "fit_ecoc", "hamming_distance",
    "make_dense_random", "make_one_vs_all", "make_one_vs_one",
    "predict_ecoc", "score_ecoc",
    "ConfusionMatrix", "MetricReport", "basic_metrics", "cohen_kappa",
    "confusion", "evaluate", "roc_auc_ovr_mean",
    "ImportanceTable", "importance_table", "per_class_importance",
    "permutation_importance", "rank_features",
    "ConfigError", "ExperimentConfig", "PipelineModel", "RunReport",
    "emit_report", "parse_config", "run_all", "run_variant",
]
