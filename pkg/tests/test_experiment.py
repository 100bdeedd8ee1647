import csv
import json
import re

import numpy as np
import pytest

from riskforge.cli import main as cli_main
from riskforge.dataset import Dataset, save_csv
from riskforge.experiment import (ConfigError, ExperimentConfig, PipelineModel,
                                  emit_report, parse_config, run_all, run_variant)

from .conftest import make_blobs

RATINGS = ["AA", "BBB", "BB", "CCC"]  # one per default bucket
SECTORS = ["Tech", "Energy", "Retail"]


def write_ratings_csv(path, n=160, seed=7, n_features=5):
    """Synthetic agency-ratings file in the expected CSV shape."""
    rng = np.random.default_rng(seed)
    names = ["currentRatio", "cashRatio", "debtRatio", "returnOnAssets",
             "cashPerShare"][:n_features]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["Name", "Sector", "Rating"] + names)
        for i in range(n):
            grade = i % 4
            base = [1.8, 0.9, 0.0, -0.9][grade]
            vals = rng.normal(base, 0.6, size=len(names))
            writer.writerow([f"Co{i}", SECTORS[i % 3], RATINGS[grade]]
                            + [repr(float(v)) for v in vals])
    return path


def fast_config(csv_path, out_dir, **overrides) -> ExperimentConfig:
    cfg = ExperimentConfig(
        dataset=str(csv_path),
        seed=3,
        classifiers=("DT", "KNN"),
        variants=("baseline", "lasso"),
        lambda_grid=(2.0, 0.6, 0.2, 0.05),
        pfi_repeats=3,
        output_dir=str(out_dir),
        classifier_params={"DT": {"max_depth": 5}},
    )
    for key, val in overrides.items():
        setattr(cfg, key, val)
    cfg.validate()
    return cfg


class TestConfigParsing:
    def test_full_parse(self, tmp_path):
        path = tmp_path / "exp.cfg"
        path.write_text(
            "# comment\n"
            "dataset = data.csv\n"
            "seed = 11\n"
            "k_folds = 4\n"
            "train_fraction = 0.8\n"
            "classifiers = dt, rf\n"
            "variants = baseline, ecoc\n"
            "lambda_grid = 0.5, 0.1\n"
            "ecoc_scheme = one_vs_one\n"
            "pfi_repeats = 7\n"
            "output_dir = results\n"
            "formats = json\n"
            "rf.n_trees = 12\n")
        cfg = parse_config(path)
        assert cfg.seed == 11 and cfg.k_folds == 4
        assert cfg.classifiers == ("DT", "RF")
        assert cfg.lambda_grid == (0.5, 0.1)
        assert cfg.classifier_params == {"RF": {"n_trees": 12}}

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "exp.cfg"
        path.write_text("dataset = d.csv\nk_fold = 3\n")
        with pytest.raises(ConfigError, match="k_fold"):
            parse_config(path)

    def test_unknown_classifier_param_rejected(self, tmp_path):
        path = tmp_path / "exp.cfg"
        path.write_text("dataset = d.csv\ndt.depth = 3\n")
        with pytest.raises(ConfigError, match="depth"):
            parse_config(path)

    def test_value_constraints(self, tmp_path):
        path = tmp_path / "exp.cfg"
        path.write_text("dataset = d.csv\nk_folds = 1\n")
        with pytest.raises(ConfigError, match="k_folds"):
            parse_config(path)
        path.write_text("dataset = d.csv\nvariants = baseline, magic\n")
        with pytest.raises(ConfigError, match="magic"):
            parse_config(path)

    def test_duplicate_key_rejected(self, tmp_path):
        path = tmp_path / "exp.cfg"
        path.write_text("dataset = a.csv\ndataset = b.csv\n")
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config(path)


class TestRunVariant:
    def test_baseline_dt_on_separable_data(self, tmp_path):
        path = write_ratings_csv(tmp_path / "r.csv", n=240, seed=1)
        cfg = fast_config(path, tmp_path / "out")
        cell, pipeline = run_variant(cfg, "baseline", cfg.spec_for("DT"))
        assert cell.error is None
        assert all(acc >= 0.7 for acc in cell.cv_fold_accuracies)
        assert cell.feature_count_used == 6  # Sector + 5 ratios
        assert cell.holdout_metrics is not None
        assert cell.cv_time_seconds >= 0.0

    def test_baseline_dt_separable_three_class_folds(self, tmp_path):
        # cleanly separated grades -> every fold accuracy at least 0.9
        rng = np.random.default_rng(0)
        path = tmp_path / "sep.csv"
        with open(path, "w", newline="") as fh:
            import csv as csv_mod
            writer = csv_mod.writer(fh)
            writer.writerow(["Sector", "Rating", "x0", "x1"])
            for i in range(180):
                grade, base = [("AA", -6.0), ("BB", 0.0), ("CCC", 6.0)][i % 3]
                vals = rng.normal(base, 0.5, size=2)
                writer.writerow(["Tech", grade] + [repr(float(v)) for v in vals])
        cfg = fast_config(path, tmp_path / "out", variants=("baseline",),
                          classifiers=("DT",))
        with pytest.warns(RuntimeWarning):  # Medium bucket is empty
            cell, _ = run_variant(cfg, "baseline", cfg.spec_for("DT"))
        assert all(acc >= 0.9 for acc in cell.cv_fold_accuracies)

    def test_lasso_variant_reduces_or_keeps_features(self, tmp_path):
        path = write_ratings_csv(tmp_path / "r.csv", n=240, seed=2)
        cfg = fast_config(path, tmp_path / "out")
        cell, pipeline = run_variant(cfg, "lasso", cfg.spec_for("DT"))
        assert 1 <= cell.feature_count_used <= 6
        assert pipeline.selection is not None
        assert cell.selection_time_seconds > 0.0

    def test_single_cell_grid(self, tmp_path):
        path = write_ratings_csv(tmp_path / "r.csv")
        cfg = fast_config(path, tmp_path / "out", variants=("baseline",),
                          classifiers=("DT",))
        report = run_all(cfg)
        assert len(report.cells) == 1
        assert report.cells[0].variant == "baseline"

    def test_unknown_variant_rejected(self, tmp_path):
        path = write_ratings_csv(tmp_path / "r.csv")
        cfg = fast_config(path, tmp_path / "out")
        with pytest.raises(ValueError, match="variant"):
            run_variant(cfg, "bogus", cfg.spec_for("DT"))

    def test_clip_quantile_flag(self, tmp_path):
        path = write_ratings_csv(tmp_path / "r.csv", n=200, seed=9)
        cfg = fast_config(path, tmp_path / "out", clip_quantile=0.05)
        cell, pipeline = run_variant(cfg, "baseline", cfg.spec_for("DT"))
        assert cell.error is None
        assert pipeline.clip is not None
        # off by default
        cfg_off = fast_config(path, tmp_path / "out")
        _, pipeline_off = run_variant(cfg_off, "baseline", cfg_off.spec_for("DT"))
        assert pipeline_off.clip is None

    def test_pinned_ecoc_code(self, tmp_path):
        from riskforge.ecoc import make_one_vs_one
        path = write_ratings_csv(tmp_path / "r.csv", n=200, seed=3)
        code_path = tmp_path / "code.json"
        make_one_vs_one(4).save(code_path)
        cfg = fast_config(path, tmp_path / "out", variants=("ecoc",),
                          ecoc_code=str(code_path))
        cell, pipeline = run_variant(cfg, "ecoc", cfg.spec_for("DT"))
        assert cell.error is None
        assert len(pipeline.model.column_models) == 6  # 4*(4-1)/2 pair columns


class TestRunAll:
    def test_grid_completeness(self, tmp_path):
        path = write_ratings_csv(tmp_path / "r.csv", n=200)
        cfg = fast_config(path, tmp_path / "out",
                          variants=("baseline", "ecoc", "lasso", "lasso_ecoc"))
        report = run_all(cfg)
        assert len(report.cells) == 8  # 4 variants x 2 classifiers
        pairs = {(c.variant, c.classifier) for c in report.cells}
        assert len(pairs) == 8
        assert all(c.error is None for c in report.cells)
        for algo in cfg.classifiers:  # lasso never uses more features than baseline
            baseline_p = report.cell("baseline", algo).feature_count_used
            assert report.cell("lasso", algo).feature_count_used <= baseline_p

    def test_importance_from_best_baseline(self, tmp_path):
        path = write_ratings_csv(tmp_path / "r.csv", n=200)
        cfg = fast_config(path, tmp_path / "out")
        report = run_all(cfg)
        assert report.importance is not None
        assert report.importance_classifier in ("DT", "KNN")
        best = max((c for c in report.cells if c.variant == "baseline"),
                   key=lambda c: c.cv_mean_score)
        assert report.importance_classifier == best.classifier
        assert report.importance.per_class.shape == (4, 6)

    def test_cell_fault_isolation(self, tmp_path):
        path = write_ratings_csv(tmp_path / "r.csv", n=100)
        cfg = fast_config(path, tmp_path / "out",
                          classifiers=("KNN", "DT"), variants=("baseline",))
        # force KNN to fail: more neighbors than any fold's training rows
        cfg.classifier_params = {"KNN": {"n_neighbors": 10_000}}
        cfg.validate()
        report = run_all(cfg)
        knn = report.cell("baseline", "KNN")
        dt = report.cell("baseline", "DT")
        assert knn.error is not None and "n_neighbors" in knn.error
        assert dt.error is None

    def test_determinism_modulo_timing(self, tmp_path):
        path = write_ratings_csv(tmp_path / "r.csv", n=160)
        cfg = fast_config(path, tmp_path / "out")
        doc1 = _canonical(run_all(cfg).to_json())
        doc2 = _canonical(run_all(cfg).to_json())
        assert doc1 == doc2

    def test_lasso_no_leakage_under_corruption(self, tmp_path):
        # corrupting held-out rows must not change fitted stats or supports
        path = write_ratings_csv(tmp_path / "r.csv", n=200, seed=5)
        cfg = fast_config(path, tmp_path / "out", variants=("lasso",),
                          classifiers=("DT",))
        _, pipeline_a = run_variant(cfg, "lasso", cfg.spec_for("DT"))

        from riskforge.dataset import train_test_split
        from riskforge._seeds import derive_seed
        from riskforge.experiment import load_config_dataset
        data = load_config_dataset(cfg)
        train, test = train_test_split(data, cfg.train_fraction,
                                       derive_seed(cfg.seed, "split"))
        corrupted_rows = np.where(
            np.isin(np.arange(data.n), _row_ids(data, test))[:, None],
            data.features * 1e3 + 5.0, data.features)
        corrupted = Dataset(corrupted_rows, data.feature_names, data.labels,
                            data.class_names)
        _, pipeline_b = run_variant(cfg, "lasso", cfg.spec_for("DT"),
                                    data=corrupted)
        assert (pipeline_a.stats.mean == pipeline_b.stats.mean).all()
        assert (pipeline_a.stats.std == pipeline_b.stats.std).all()
        assert pipeline_a.selection.selected == pipeline_b.selection.selected


def _row_ids(data, subset):
    """Indices in `data` of the rows present in `subset` (unique rows assumed)."""
    lookup = {tuple(row): i for i, row in enumerate(data.features)}
    return np.array(sorted(lookup[tuple(row)] for row in subset.features))


def _canonical(doc: dict) -> str:
    doc = json.loads(json.dumps(doc))  # deep copy
    doc["provenance"].pop("timestamp")
    for cell in doc["cells"]:
        for key in list(cell):
            if key.endswith("_seconds"):
                cell.pop(key)
    return json.dumps(doc, sort_keys=True)


class TestEmitReport:
    def _report(self, tmp_path, **overrides):
        path = write_ratings_csv(tmp_path / "r.csv", n=160)
        cfg = fast_config(path, tmp_path / "out", **overrides)
        return run_all(cfg), cfg

    def test_json_only_single_file(self, tmp_path):
        report, cfg = self._report(tmp_path)
        written = emit_report(report, tmp_path / "only", formats=("json",))
        assert [p.split("/")[-1] for p in written] == ["report.json"]

    def test_csv_layout_matches_metric_table(self, tmp_path):
        report, cfg = self._report(tmp_path)
        emit_report(report, cfg.output_dir, formats=("csv",))
        header = (tmp_path / "out" / "metrics_baseline.csv").read_text().splitlines()[0]
        assert header == ("Classifier,Accuracy,Precision,F1 Score,Jaccard score,"
                          "Cohen Kappa Score,ROC AUC Mean,CV Mean Scores")
        cost_header = (tmp_path / "out" / "cost.csv").read_text().splitlines()[0]
        assert cost_header == "Variant,Classifier,Features,Training Time,CV Time,Accuracy"

    def test_overwrite_is_atomic_rename(self, tmp_path):
        report, cfg = self._report(tmp_path)
        emit_report(report, cfg.output_dir, formats=("json",))
        first = (tmp_path / "out" / "report.json").read_text()
        emit_report(report, cfg.output_dir, formats=("json",))
        second = (tmp_path / "out" / "report.json").read_text()
        assert json.loads(first)["provenance"]["config_hash"] == \
            json.loads(second)["provenance"]["config_hash"]
        leftovers = [p.name for p in (tmp_path / "out").iterdir()
                     if p.name.startswith(".riskforge-")]
        assert leftovers == []

    def test_svg_per_class(self, tmp_path):
        report, cfg = self._report(tmp_path)
        written = emit_report(report, cfg.output_dir, formats=("svg",))
        names = sorted(p.split("/")[-1] for p in written)
        assert names == ["importance_High.svg", "importance_Highest.svg",
                         "importance_Low.svg", "importance_Medium.svg"]


class TestPipelineModel:
    def test_blob_round_trip_plain(self, tmp_path):
        path = write_ratings_csv(tmp_path / "r.csv", n=160)
        cfg = fast_config(path, tmp_path / "out")
        _, pipeline = run_variant(cfg, "lasso", cfg.spec_for("DT"))
        blob_path = tmp_path / "pipe.json"
        pipeline.save(blob_path)
        loaded = PipelineModel.load(blob_path)
        rng = np.random.default_rng(0)
        X = rng.normal(0.5, 1.0, size=(25, 6))
        assert (loaded.predict(X) == pipeline.predict(X)).all()
        assert np.allclose(loaded.score(X), pipeline.score(X))

    def test_blob_round_trip_ecoc(self, tmp_path):
        path = write_ratings_csv(tmp_path / "r.csv", n=160)
        cfg = fast_config(path, tmp_path / "out")
        _, pipeline = run_variant(cfg, "ecoc", cfg.spec_for("DT"))
        blob_path = tmp_path / "pipe.json"
        pipeline.save(blob_path)
        loaded = PipelineModel.load(blob_path)
        X = np.random.default_rng(1).normal(0.5, 1.0, size=(25, 6))
        assert (loaded.predict(X) == pipeline.predict(X)).all()


class TestCli:
    def _write_config(self, tmp_path, csv_path, extra=""):
        cfg_path = tmp_path / "exp.cfg"
        cfg_path.write_text(
            f"dataset = {csv_path}\n"
            "seed = 3\n"
            "classifiers = DT, KNN\n"
            "variants = baseline, lasso\n"
            "lambda_grid = 2.0, 0.5, 0.1\n"
            "pfi_repeats = 2\n"
            f"output_dir = {tmp_path / 'out'}\n"
            "formats = csv, json\n"
            "dt.max_depth = 5\n" + extra)
        return cfg_path

    def test_validate_config_ok(self, tmp_path, capsys):
        csv_path = write_ratings_csv(tmp_path / "r.csv")
        cfg_path = self._write_config(tmp_path, csv_path)
        assert cli_main(["validate-config", str(cfg_path)]) == 0
        assert "config OK" in capsys.readouterr().out

    def test_validate_config_error_exit_1(self, tmp_path, capsys):
        cfg_path = tmp_path / "bad.cfg"
        cfg_path.write_text("dataset = d.csv\nbogus_key = 1\n")
        assert cli_main(["validate-config", str(cfg_path)]) == 1
        assert "bogus_key" in capsys.readouterr().err

    def test_run_writes_report_and_exits_0(self, tmp_path, capsys):
        csv_path = write_ratings_csv(tmp_path / "r.csv", n=160)
        cfg_path = self._write_config(tmp_path, csv_path)
        assert cli_main(["run", "--config", str(cfg_path)]) == 0
        out = capsys.readouterr().out
        assert (tmp_path / "out" / "report.json").exists()
        assert "report.json" in out

    def test_run_missing_dataset_exit_2(self, tmp_path, capsys):
        cfg_path = self._write_config(tmp_path, tmp_path / "absent.csv")
        assert cli_main(["run", "--config", str(cfg_path)]) == 2
        assert "data error" in capsys.readouterr().err

    def test_run_failed_cell_exit_3(self, tmp_path, capsys):
        csv_path = write_ratings_csv(tmp_path / "r.csv", n=100)
        cfg_path = self._write_config(tmp_path, csv_path,
                                      extra="knn.n_neighbors = 10000\n")
        assert cli_main(["run", "--config", str(cfg_path)]) == 3
        err = capsys.readouterr().err
        assert "failed" in err
        assert (tmp_path / "out" / "report.json").exists()  # report still written

    def test_pfi_subcommand_round_trip(self, tmp_path, capsys):
        csv_path = write_ratings_csv(tmp_path / "r.csv", n=160)
        cfg_path = self._write_config(tmp_path, csv_path)
        model_path = tmp_path / "best.json"
        assert cli_main(["run", "--config", str(cfg_path),
                         "--save-best-model", str(model_path)]) == 0
        out_csv = tmp_path / "imp.csv"
        assert cli_main(["pfi", "--model", str(model_path), "--data", str(csv_path),
                         "--repeats", "2", "--seed", "1",
                         "--out", str(out_csv),
                         "--svg-dir", str(tmp_path / "charts")]) == 0
        lines = out_csv.read_text().splitlines()
        assert lines[0] == "Features,Low,Medium,High,Highest"
        assert len(lines) == 7  # header + 6 features
        charts = sorted(p.name for p in (tmp_path / "charts").iterdir())
        assert charts == ["importance_High.svg", "importance_Highest.svg",
                          "importance_Low.svg", "importance_Medium.svg"]

    def test_inspect_prints_tables(self, tmp_path, capsys):
        csv_path = write_ratings_csv(tmp_path / "r.csv", n=160)
        cfg_path = self._write_config(tmp_path, csv_path)
        cli_main(["run", "--config", str(cfg_path)])
        capsys.readouterr()
        assert cli_main(["inspect", "--report",
                         str(tmp_path / "out" / "report.json")]) == 0
        out = capsys.readouterr().out
        assert "== baseline" in out and "Cohen Kappa Score" in out
        assert "== cost ==" in out
