"""Config-driven experiment harness: the variant x classifier grid with
stratified CV, timing capture, and table emission.

Variants compose the pipeline stages:

    baseline    standardize -> fit classifier
    ecoc        standardize -> fit ECOC over the classifier
    lasso       standardize -> LASSO selection -> restrict -> fit classifier
    lasso_ecoc  standardize -> LASSO selection -> restrict -> fit ECOC

Cross-validation runs on the training side of the 70/30 split; within every
fold the standardizer and the feature selection are refit on that fold's
training rows only, so no held-out information leaks into any training
stage. The final model per cell trains on the full 70% and is evaluated on
the held-out 30%.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import time
import warnings
from dataclasses import dataclass, field, fields

import numpy as np

from ._seeds import derive_seed
from . import __version__
from .classifiers import ALGORITHMS, DEFAULT_PARAMS, ClassifierSpec
from .classifiers import fit as fit_classifier
from .classifiers import model_from_blob
from .dataset import (DEFAULT_CATEGORICAL_COLUMNS, DEFAULT_DROP_COLUMNS,
                      DEFAULT_RATING_COLUMN, ClipStats, DataError, Dataset,
                      RatingMap, StandardizationStats, apply_clipper,
                      apply_standardizer, fit_clipper, fit_standardizer,
                      load_dataset, parse_rating_map, sector_exempt_columns,
                      stratified_k_fold, train_test_split)
from .ecoc import (CodingMatrix, EcocModel, fit_ecoc, make_dense_random,
                   make_one_vs_all, make_one_vs_one)
from .lasso import FeatureSelection, restrict, select_features
from .metrics import TABLE_COLUMNS, MetricReport, evaluate
from .pfi import ImportanceTable, importance_svg, importance_table

VARIANTS = ("baseline", "ecoc", "lasso", "lasso_ecoc")
FORMATS = ("csv", "json", "svg")
PIPELINE_FORMAT = "riskforge-pipeline"
PIPELINE_VERSION = 1


class ConfigError(Exception):
    """Raised for unparsable, unknown, or out-of-range configuration."""


@dataclass
class ExperimentConfig:
    dataset: str = ""
    rating_map: str = "default"
    rating_column: str = DEFAULT_RATING_COLUMN
    drop_columns: tuple[str, ...] = DEFAULT_DROP_COLUMNS
    categorical_columns: tuple[str, ...] = DEFAULT_CATEGORICAL_COLUMNS
    seed: int = 0
    k_folds: int = 3
    train_fraction: float = 0.7
    classifiers: tuple[str, ...] = ALGORITHMS
    variants: tuple[str, ...] = VARIANTS
    lambda_grid: tuple[float, ...] | None = None  # None -> automatic path
    clip_quantile: float = 0.0  # 0 disables outlier clipping
    ecoc_scheme: str = "one_vs_all"
    ecoc_length: int = 0  # dense_random code length; 0 -> 2 * k
    ecoc_code: str = ""  # optional path to a pinned CodingMatrix JSON
    pfi_repeats: int = 30
    output_dir: str = "out"
    formats: tuple[str, ...] = ("csv", "json")
    classifier_params: dict = field(default_factory=dict)  # {"rf": {"n_trees": 50}}

    def validate(self) -> None:
        if not self.dataset:
            raise ConfigError("dataset path is required")
        if self.k_folds < 2:
            raise ConfigError("k_folds must be >= 2")
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigError("train_fraction must be in (0, 1)")
        if not self.classifiers:
            raise ConfigError("at least one classifier is required")
        if not self.variants:
            raise ConfigError("at least one variant is required")
        bad = [c for c in self.classifiers if c not in ALGORITHMS]
        if bad:
            raise ConfigError(f"unknown classifiers {bad}; expected {list(ALGORITHMS)}")
        bad = [v for v in self.variants if v not in VARIANTS]
        if bad:
            raise ConfigError(f"unknown variants {bad}; expected {list(VARIANTS)}")
        if self.ecoc_scheme not in ("one_vs_all", "one_vs_one", "dense_random"):
            raise ConfigError(f"unknown ecoc_scheme {self.ecoc_scheme!r}")
        bad = [f for f in self.formats if f not in FORMATS]
        if bad:
            raise ConfigError(f"unknown formats {bad}; expected {list(FORMATS)}")
        if self.pfi_repeats < 1:
            raise ConfigError("pfi_repeats must be >= 1")
        if self.lambda_grid is not None and len(self.lambda_grid) == 0:
            raise ConfigError("lambda_grid must be non-empty")
        if not 0.0 <= self.clip_quantile < 0.5:
            raise ConfigError("clip_quantile must be in [0, 0.5)")
        for algo, overrides in self.classifier_params.items():
            try:  # delegate value validation to the spec
                ClassifierSpec(algo, overrides)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None

    def spec_for(self, algo: str) -> ClassifierSpec:
        return ClassifierSpec(algo, self.classifier_params.get(algo, {}),
                              seed=derive_seed(self.seed, "spec", algo))

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            val = getattr(self, f.name)
            out[f.name] = list(val) if isinstance(val, tuple) else val
        return out

    def content_hash(self) -> str:
        canon = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:16]


_LIST_KEYS = {"classifiers", "variants", "formats", "drop_columns", "categorical_columns"}
_INT_KEYS = {"seed", "k_folds", "ecoc_length", "pfi_repeats"}
_FLOAT_KEYS = {"train_fraction", "clip_quantile"}
_STR_KEYS = {"dataset", "rating_map", "rating_column", "ecoc_scheme", "ecoc_code",
             "output_dir"}


def _parse_param_value(raw: str):
    low = raw.lower()
    if low in ("true", "false"):
        return low == "true"
    if low in ("none", "null"):
        return None
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        return raw


def parse_config(path) -> ExperimentConfig:
    """Parse the flat `key = value` config format; unknown keys are errors."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    cfg = ExperimentConfig()
    algo_by_lower = {a.lower(): a for a in ALGORITHMS}
    seen = set()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected KEY = VALUE, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lower()
        if key in seen:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        seen.add(key)
        if "." in key:
            algo_part, _, param = key.partition(".")
            if algo_part not in algo_by_lower:
                raise ConfigError(f"{path}:{lineno}: unknown classifier prefix {algo_part!r}")
            algo = algo_by_lower[algo_part]
            if param not in DEFAULT_PARAMS[algo]:
                raise ConfigError(f"{path}:{lineno}: unknown parameter "
                                  f"{param!r} for {algo}")
            cfg.classifier_params.setdefault(algo, {})[param] = _parse_param_value(value)
            continue
        if key in _LIST_KEYS:
            items = tuple(s.strip() for s in value.split(",") if s.strip())
            if key == "classifiers":
                items = tuple(algo_by_lower.get(s.lower(), s) for s in items)
            setattr(cfg, key, items)
        elif key in _INT_KEYS:
            try:
                setattr(cfg, key, int(value))
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: {key} must be an integer") from None
        elif key in _FLOAT_KEYS:
            try:
                setattr(cfg, key, float(value))
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: {key} must be a number") from None
        elif key in _STR_KEYS:
            setattr(cfg, key, value)
        elif key == "lambda_grid":
            if value.lower() == "auto":
                cfg.lambda_grid = None
            else:
                try:
                    cfg.lambda_grid = tuple(float(s) for s in value.split(",") if s.strip())
                except ValueError:
                    raise ConfigError(f"{path}:{lineno}: lambda_grid must be "
                                      "'auto' or comma-separated numbers") from None
        else:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
    cfg.validate()
    return cfg


def load_config_dataset(config: ExperimentConfig) -> Dataset:
    rating_map = (RatingMap.default() if config.rating_map == "default"
                  else parse_rating_map(config.rating_map))
    return load_dataset(config.dataset, rating_map,
                        rating_column=config.rating_column,
                        categorical_columns=config.categorical_columns,
                        drop_columns=config.drop_columns)


def _coding_matrix(config: ExperimentConfig, k: int) -> CodingMatrix:
    if config.ecoc_code:  # pinned code wins over the scheme setting
        matrix = CodingMatrix.load(config.ecoc_code)
        if matrix.k != k:
            raise DataError(f"pinned coding matrix has {matrix.k} rows, data has {k} classes")
        return matrix
    if config.ecoc_scheme == "one_vs_all":
        return make_one_vs_all(k)
    if config.ecoc_scheme == "one_vs_one":
        return make_one_vs_one(k)
    length = config.ecoc_length or 2 * k
    return make_dense_random(k, length, seed=derive_seed(config.seed, "ecoc_code"))


@dataclass
class PipelineModel:
    """Optional clipper + standardizer + optional feature selection +
    classifier, as one predictor over raw feature space (what the model blob
    stores)."""

    stats: StandardizationStats
    selection: FeatureSelection | None
    model: object  # FittedClassifier or EcocModel
    feature_names: tuple[str, ...]
    class_names: tuple[str, ...]
    clip: ClipStats | None = None

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def _transform(self, X: np.ndarray) -> np.ndarray:
        data = Dataset(X, self.feature_names, np.zeros(X.shape[0], dtype=np.int64), ("x",))
        if self.clip is not None:
            data = apply_clipper(data, self.clip)
        out = apply_standardizer(data, self.stats)
        if self.selection is not None:
            out = restrict(out, self.selection)
        return out.features

    def predict(self, X) -> np.ndarray:
        return self.model.predict(self._transform(np.asarray(X, dtype=np.float64)))

    def score(self, X) -> np.ndarray:
        return self.model.score(self._transform(np.asarray(X, dtype=np.float64)))

    def to_blob(self) -> dict:
        if isinstance(self.model, EcocModel):
            model_blob = {
                "kind": "ecoc",
                "matrix": self.model.matrix.to_json(),
                "columns": [m.to_blob() for m in self.model.column_models],
                "base": self.model.base_spec.algorithm,
                "base_params": self.model.base_spec.params,
                "base_seed": self.model.base_spec.seed,
            }
        else:
            model_blob = {"kind": "classifier", "model": self.model.to_blob()}
        return {
            "format": PIPELINE_FORMAT,
            "version": PIPELINE_VERSION,
            "feature_names": list(self.feature_names),
            "class_names": list(self.class_names),
            "standardizer": {
                "mean": self.stats.mean.tolist(),
                "std": self.stats.std.tolist(),
                "exempt": sorted(self.stats.exempt_columns),
            },
            "clip": None if self.clip is None else {
                "lower": self.clip.lower.tolist(),
                "upper": self.clip.upper.tolist(),
                "exempt": sorted(self.clip.exempt_columns),
            },
            "selection": None if self.selection is None else {
                "selected": list(self.selection.selected),
                "per_class": [list(s) for s in self.selection.per_class_supports],
                "lambda_used": self.selection.penalty_used,
            },
            "model": model_blob,
        }

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_blob(), fh)

    @classmethod
    def from_blob(cls, blob: dict) -> "PipelineModel":
        if blob.get("format") != PIPELINE_FORMAT:
            raise ValueError("not a pipeline blob")
        feature_names = tuple(blob["feature_names"])
        class_names = tuple(blob["class_names"])
        std = blob["standardizer"]
        stats = StandardizationStats(np.array(std["mean"]), np.array(std["std"]),
                                     frozenset(std["exempt"]))
        clip = None
        if blob.get("clip") is not None:
            c = blob["clip"]
            clip = ClipStats(np.array(c["lower"]), np.array(c["upper"]),
                             frozenset(c["exempt"]))
        selection = None
        if blob["selection"] is not None:
            sel = blob["selection"]
            selection = FeatureSelection(tuple(sel["selected"]),
                                         tuple(tuple(s) for s in sel["per_class"]),
                                         sel["lambda_used"], feature_names, class_names)
        mb = blob["model"]
        if mb["kind"] == "ecoc":
            matrix = CodingMatrix.from_json(mb["matrix"])
            columns = tuple(model_from_blob(b) for b in mb["columns"])
            base = ClassifierSpec(mb["base"], mb["base_params"], mb["base_seed"])
            model = EcocModel(matrix, columns, base)
        else:
            model = model_from_blob(mb["model"])
        return cls(stats, selection, model, feature_names, class_names, clip)

    @classmethod
    def load(cls, path) -> "PipelineModel":
        with open(path, encoding="utf-8") as fh:
            return cls.from_blob(json.load(fh))


@dataclass
class CellReport:
    """One (variant, classifier) grid cell."""

    variant: str
    classifier: str
    error: str | None = None
    cv_metrics: dict | None = None            # fold means of the seven metrics
    cv_fold_accuracies: list = field(default_factory=list)
    cv_mean_score: float = float("nan")       # mean held-out fold accuracy
    mean_training_time_seconds: float = float("nan")
    cv_time_seconds: float = float("nan")     # summed per-fold fit time
    selection_time_seconds: float = 0.0
    feature_count_used: int = 0
    holdout_metrics: MetricReport | None = None
    final_training_time_seconds: float = float("nan")

    def to_json(self) -> dict:
        return {
            "variant": self.variant,
            "classifier": self.classifier,
            "error": self.error,
            "cv_metrics": self.cv_metrics,
            "cv_fold_accuracies": self.cv_fold_accuracies,
            "cv_mean_score": self.cv_mean_score,
            "mean_training_time_seconds": self.mean_training_time_seconds,
            "cv_time_seconds": self.cv_time_seconds,
            "selection_time_seconds": self.selection_time_seconds,
            "feature_count_used": self.feature_count_used,
            "holdout_metrics": None if self.holdout_metrics is None
            else self.holdout_metrics.to_json(),
            "final_training_time_seconds": self.final_training_time_seconds,
        }


@dataclass
class RunReport:
    cells: list[CellReport]
    importance: ImportanceTable | None
    importance_classifier: str | None
    provenance: dict
    best_baseline_pipeline: "PipelineModel | None" = None  # not serialized

    def cell(self, variant: str, classifier: str) -> CellReport:
        for c in self.cells:
            if c.variant == variant and c.classifier == classifier:
                return c
        raise KeyError(f"no cell ({variant}, {classifier})")

    def to_json(self) -> dict:
        return {
            "provenance": self.provenance,
            "cells": [c.to_json() for c in self.cells],
            "importance": None if self.importance is None else self.importance.to_json(),
            "importance_classifier": self.importance_classifier,
        }


def _select_with_timer(train_std: Dataset, config: ExperimentConfig, seed_tag):
    """LASSO selection plus wall time; inner folds for the penalty grid come
    from the given data's own stratification."""
    inner_k = min(config.k_folds, int(np.bincount(train_std.labels).min()))
    if inner_k < 2:
        raise DataError("a class is too small for inner selection folds")
    inner = stratified_k_fold(train_std, inner_k, derive_seed(config.seed, "inner", *seed_tag))
    start = time.perf_counter()
    selection = select_features(train_std, config.lambda_grid, inner)
    return selection, time.perf_counter() - start


def _preprocess(train_part: Dataset, eval_part: Dataset, config: ExperimentConfig):
    """Fit clipper (optional) and standardizer on the training rows only."""
    exempt = sector_exempt_columns(train_part, config.categorical_columns)
    clip = None
    if config.clip_quantile > 0.0:
        clip = fit_clipper(train_part, config.clip_quantile, exempt)
        train_part = apply_clipper(train_part, clip)
        eval_part = apply_clipper(eval_part, clip)
    stats = fit_standardizer(train_part, exempt)
    return (apply_standardizer(train_part, stats), apply_standardizer(eval_part, stats),
            stats, clip)


def _fit_stage(variant: str, spec: ClassifierSpec, train_std: Dataset,
               config: ExperimentConfig):
    """Fit the cell's model on (already standardized, already restricted)
    data; returns (model, fit_seconds)."""
    start = time.perf_counter()
    if variant in ("ecoc", "lasso_ecoc"):
        model = fit_ecoc(spec, _coding_matrix(config, train_std.k), train_std)
    else:
        model = fit_classifier(spec, train_std)
    return model, time.perf_counter() - start


def run_variant(config: ExperimentConfig, variant: str, spec: ClassifierSpec,
                data: Dataset | None = None) -> tuple[CellReport, PipelineModel]:
    """Execute one grid cell; returns its report and the final fitted pipeline."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if data is None:
        data = load_config_dataset(config)
    train, test = train_test_split(data, config.train_fraction,
                                   derive_seed(config.seed, "split"))
    folds = stratified_k_fold(train, config.k_folds, derive_seed(config.seed, "folds"))
    uses_lasso = variant in ("lasso", "lasso_ecoc")
    cell = CellReport(variant=variant, classifier=spec.algorithm)

    fold_reports, fold_fit_times, selection_time = [], [], 0.0
    for f in range(folds.k_folds):
        fold_train = train.take_rows(folds.train_rows(f))
        fold_eval = train.take_rows(folds.test_rows(f))
        fold_train_std, fold_eval_std, _, _ = _preprocess(fold_train, fold_eval, config)
        if uses_lasso:
            selection, sel_secs = _select_with_timer(fold_train_std, config, ("fold", f))
            selection_time += sel_secs
            fold_train_std = restrict(fold_train_std, selection)
            fold_eval_std = restrict(fold_eval_std, selection)
        fold_spec = spec.with_seed(derive_seed(spec.seed, variant, "fold", f))
        model, fit_secs = _fit_stage(variant, fold_spec, fold_train_std, config)
        fold_fit_times.append(fit_secs)
        fold_reports.append(evaluate(fold_eval_std.labels,
                                     model.predict(fold_eval_std.features),
                                     model.score(fold_eval_std.features)))

    cell.cv_fold_accuracies = [r.accuracy for r in fold_reports]
    cell.cv_mean_score = float(np.mean(cell.cv_fold_accuracies))
    summaries = [r.summary() for r in fold_reports]
    cell.cv_metrics = {key: float(np.mean([s[key] for s in summaries]))
                       for key in summaries[0]}
    cell.mean_training_time_seconds = float(np.mean(fold_fit_times))
    cell.cv_time_seconds = float(np.sum(fold_fit_times))
    cell.selection_time_seconds = selection_time

    # Final model: fit on the 70% side, evaluate on the held-out 30%.
    train_std, test_std, stats, clip = _preprocess(train, test, config)
    selection = None
    if uses_lasso:
        selection, sel_secs = _select_with_timer(train_std, config, ("final",))
        cell.selection_time_seconds += sel_secs
        train_std = restrict(train_std, selection)
        test_std = restrict(test_std, selection)
    final_spec = spec.with_seed(derive_seed(spec.seed, variant, "final"))
    model, fit_secs = _fit_stage(variant, final_spec, train_std, config)
    cell.final_training_time_seconds = fit_secs
    cell.feature_count_used = train_std.p
    cell.holdout_metrics = evaluate(test_std.labels, model.predict(test_std.features),
                                    model.score(test_std.features))
    pipeline = PipelineModel(stats, selection, model, data.feature_names,
                             data.class_names, clip)
    return cell, pipeline


def run_all(config: ExperimentConfig) -> RunReport:
    """Run the whole grid; per-cell failures are recorded, not raised.

    The permutation-importance table comes from the best baseline cell (by CV
    mean accuracy), computed on the held-out 30% rows in raw feature space.
    """
    config.validate()
    data = load_config_dataset(config)
    cells: list[CellReport] = []
    best_baseline = None  # (cv_mean_score, classifier, pipeline)
    for variant in config.variants:
        for algo in config.classifiers:
            spec = config.spec_for(algo)
            try:
                cell, pipeline = run_variant(config, variant, spec, data)
            except Exception as exc:  # keep the rest of the grid alive
                cells.append(CellReport(variant=variant, classifier=algo,
                                        error=f"{type(exc).__name__}: {exc}"))
                continue
            cells.append(cell)
            if variant == "baseline":
                key = cell.cv_mean_score
                if best_baseline is None or key > best_baseline[0]:
                    best_baseline = (key, algo, pipeline)

    importance = None
    importance_classifier = None
    best_pipeline = None
    if best_baseline is not None:
        _, importance_classifier, best_pipeline = best_baseline
        train, test = train_test_split(data, config.train_fraction,
                                       derive_seed(config.seed, "split"))
        importance = importance_table(best_pipeline, test.features, test.labels,
                                      data.feature_names, data.class_names,
                                      repeats=config.pfi_repeats,
                                      seed=derive_seed(config.seed, "pfi"))
    elif "baseline" in config.variants:
        warnings.warn("all baseline cells failed; no importance table",
                      RuntimeWarning, stacklevel=2)

    provenance = {
        "seed": config.seed,
        "config_hash": config.content_hash(),
        "config": config.to_dict(),
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "package_version": __version__,
    }
    return RunReport(cells, importance, importance_classifier, provenance,
                     best_baseline_pipeline=best_pipeline)


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".riskforge-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise OSError(f"failed writing {path}: {exc}") from exc


def _metrics_csv(cells: list[CellReport]) -> str:
    header = ["Classifier"] + list(TABLE_COLUMNS) + ["CV Mean Scores"]
    lines = [",".join(header)]
    for cell in cells:
        if cell.error or cell.cv_metrics is None:
            lines.append(f"{cell.classifier},error:{cell.error}")
            continue
        m = cell.cv_metrics
        row = [m["accuracy"], m["macro_precision"], m["macro_f1"], m["macro_jaccard"],
               m["cohen_kappa"], m["roc_auc_ovr_mean"], cell.cv_mean_score]
        lines.append(cell.classifier + "," + ",".join(f"{v:.4f}" for v in row))
    return "\n".join(lines) + "\n"


def _cost_csv(report: RunReport) -> str:
    lines = ["Variant,Classifier,Features,Training Time,CV Time,Accuracy"]
    for cell in report.cells:
        if cell.error:
            lines.append(f"{cell.variant},{cell.classifier},error:{cell.error}")
            continue
        lines.append(",".join([
            cell.variant, cell.classifier, str(cell.feature_count_used),
            f"{cell.final_training_time_seconds:.3f}",
            f"{cell.cv_time_seconds:.3f}",
            f"{cell.cv_metrics['accuracy']:.4f}",
        ]))
    return "\n".join(lines) + "\n"


def emit_report(report: RunReport, directory, formats=("csv", "json")) -> list[str]:
    """Write the requested artifacts; returns the written paths.

    csv  -> metrics_<variant>.csv per variant, cost.csv, importance.csv
    json -> report.json (cells + importance + provenance)
    svg  -> importance_<class>.svg bar charts
    """
    bad = [f for f in formats if f not in FORMATS]
    if bad:
        raise ValueError(f"unknown formats {bad}")
    os.makedirs(directory, exist_ok=True)
    written = []

    def emit(name: str, text: str):
        path = os.path.join(directory, name)
        _atomic_write(path, text)
        written.append(path)

    if "csv" in formats:
        variants = []
        for cell in report.cells:
            if cell.variant not in variants:
                variants.append(cell.variant)
        for variant in variants:
            emit(f"metrics_{variant}.csv",
                 _metrics_csv([c for c in report.cells if c.variant == variant]))
        emit("cost.csv", _cost_csv(report))
        if report.importance is not None:
            emit("importance.csv", report.importance.to_csv())
    if "json" in formats:
        emit("report.json", json.dumps(report.to_json(), indent=2, sort_keys=True))
    if "svg" in formats and report.importance is not None:
        table = report.importance
        for c, cls_name in enumerate(table.class_names):
            safe = "".join(ch if ch.isalnum() else "_" for ch in cls_name)
            emit(f"importance_{safe}.svg",
                 importance_svg(table.feature_names, table.per_class[c],
                                title=f"Importance toward {cls_name} (pp recall drop)"))
    return written
