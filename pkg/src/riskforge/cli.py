"""Batch command-line interface.

    riskforge run --config experiment.cfg [--out DIR] [--formats csv,json,svg]
                  [--save-best-model PATH]
    riskforge pfi --model pipeline.json --data ratings.csv [--rating-map PATH]
                  [--repeats N] [--seed S] [--out importance.csv]
    riskforge inspect --report out/report.json
    riskforge validate-config experiment.cfg

Exit codes: 0 success, 1 configuration error, 2 data error, 3 one or more
grid cells failed (the report is still written).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .dataset import DataError, RatingMap, load_dataset, parse_rating_map
from .experiment import (ConfigError, PipelineModel, emit_report, parse_config,
                         run_all)
from .metrics import TABLE_COLUMNS
from .pfi import importance_svg, importance_table


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="riskforge",
                                     description="Credit-risk classification experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the experiment grid from a config file")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--out", default=None, help="output directory (overrides config)")
    p_run.add_argument("--formats", default=None,
                       help="comma list from csv,json,svg (overrides config)")
    p_run.add_argument("--save-best-model", default=None, metavar="PATH",
                       help="also save the best baseline pipeline blob")

    p_pfi = sub.add_parser("pfi", help="permutation importance for a saved pipeline")
    p_pfi.add_argument("--model", required=True, help="pipeline blob from run --save-best-model")
    p_pfi.add_argument("--data", required=True, help="ratings CSV")
    p_pfi.add_argument("--rating-map", default="default")
    p_pfi.add_argument("--repeats", type=int, default=30)
    p_pfi.add_argument("--seed", type=int, default=0)
    p_pfi.add_argument("--out", default="importance.csv")
    p_pfi.add_argument("--svg-dir", default=None,
                       help="also write one importance bar chart per class")

    p_inspect = sub.add_parser("inspect", help="pretty-print a report.json")
    p_inspect.add_argument("--report", required=True)

    p_val = sub.add_parser("validate-config", help="parse and validate a config file")
    p_val.add_argument("path")
    return parser


def _format_table(header: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(str(r[i])) for r in [header] + rows) for i in range(len(header))]
    def fmt(row):
        return "  ".join(str(v).ljust(w) for v, w in zip(row, widths))
    sep = "  ".join("-" * w for w in widths)
    return "\n".join([fmt(header), sep] + [fmt(r) for r in rows])


def _cmd_run(args) -> int:
    config = parse_config(args.config)
    if args.out:
        config.output_dir = args.out
    if args.formats:
        config.formats = tuple(s.strip() for s in args.formats.split(",") if s.strip())
    config.validate()
    report = run_all(config)
    written = emit_report(report, config.output_dir, config.formats)
    for path in written:
        print(f"wrote {path}")
    if args.save_best_model:
        if report.best_baseline_pipeline is None:
            print("no successful baseline cell; model not saved", file=sys.stderr)
        else:
            report.best_baseline_pipeline.save(args.save_best_model)
            print(f"wrote {args.save_best_model}")
    failed = [c for c in report.cells if c.error]
    for cell in failed:
        print(f"cell ({cell.variant}, {cell.classifier}) failed: {cell.error}",
              file=sys.stderr)
    return 3 if failed else 0


def _cmd_pfi(args) -> int:
    pipeline = PipelineModel.load(args.model)
    rating_map = (RatingMap.default() if args.rating_map == "default"
                  else parse_rating_map(args.rating_map))
    data = load_dataset(args.data, rating_map)
    if data.feature_names != pipeline.feature_names:
        raise DataError("data columns do not match the model's feature names")
    table = importance_table(pipeline, data.features, data.labels,
                             data.feature_names, data.class_names,
                             repeats=args.repeats, seed=args.seed)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(table.to_csv())
    print(f"wrote {args.out}")
    if args.svg_dir:
        os.makedirs(args.svg_dir, exist_ok=True)
        for c, cls_name in enumerate(table.class_names):
            safe = "".join(ch if ch.isalnum() else "_" for ch in cls_name)
            path = os.path.join(args.svg_dir, f"importance_{safe}.svg")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(importance_svg(table.feature_names, table.per_class[c],
                                        title=f"Importance toward {cls_name}"))
            print(f"wrote {path}")
    order = np.argsort(-table.global_importance, kind="stable")[:10]
    print("top features (global error-rate increase):")
    for i in order:
        print(f"  {table.feature_names[i]:40s} {table.global_importance[i]:+.4f}")
    return 0


def _cmd_inspect(args) -> int:
    try:
        with open(args.report, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read report: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"malformed report JSON: {exc}") from exc
    prov = doc.get("provenance", {})
    print(f"seed={prov.get('seed')}  config_hash={prov.get('config_hash')}  "
          f"timestamp={prov.get('timestamp')}")
    variants = []
    for cell in doc.get("cells", []):
        if cell["variant"] not in variants:
            variants.append(cell["variant"])
    for variant in variants:
        print(f"\n== {variant} (CV fold means) ==")
        rows = []
        for cell in doc["cells"]:
            if cell["variant"] != variant:
                continue
            if cell.get("error"):
                rows.append([cell["classifier"]] + ["error"] * (len(TABLE_COLUMNS) + 1))
                continue
            m = cell["cv_metrics"]
            vals = [m["accuracy"], m["macro_precision"], m["macro_f1"],
                    m["macro_jaccard"], m["cohen_kappa"], m["roc_auc_ovr_mean"],
                    cell["cv_mean_score"]]
            rows.append([cell["classifier"]] + [f"{v:.4f}" for v in vals])
        print(_format_table(["Classifier"] + list(TABLE_COLUMNS) + ["CV Mean Scores"], rows))
    print("\n== cost ==")
    rows = [[c["variant"], c["classifier"], str(c.get("feature_count_used", "")),
             f"{c.get('final_training_time_seconds', float('nan')):.3f}",
             f"{c.get('cv_time_seconds', float('nan')):.3f}"]
            for c in doc.get("cells", []) if not c.get("error")]
    print(_format_table(["Variant", "Classifier", "Features", "Training Time", "CV Time"],
                        rows))
    imp = doc.get("importance")
    if imp:
        print(f"\n== importance ({doc.get('importance_classifier')}) ==")
        header = ["Feature"] + list(imp["class_names"])
        per_class = np.array(imp["per_class"])
        rows = [[name] + [f"{per_class[c, j]:.2f}" for c in range(per_class.shape[0])]
                for j, name in enumerate(imp["feature_names"])]
        print(_format_table(header, rows))
    return 0


def _cmd_validate(args) -> int:
    config = parse_config(args.path)
    print(f"config OK: {len(config.variants)} variant(s) x "
          f"{len(config.classifiers)} classifier(s), seed={config.seed}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"run": _cmd_run, "pfi": _cmd_pfi, "inspect": _cmd_inspect,
                "validate-config": _cmd_validate}
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
