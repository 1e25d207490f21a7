"""Command-line interface: train, predict, evaluate, cv, and benchmark.

Exit codes: 0 on success, 1 on runtime errors (one diagnostic line on
stderr), 2 on usage errors.
"""

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from .benchmarks import SUITE_NAMES, run_benchmark
from .data import CsvParseError, FeatureEncoder, TableSchema, load_csv
from .ensemble import predict_labels, predict_regression
from .metrics import ClassificationReport, RegressionReport, confusion_matrix
from .persistence import load_model, save_model, write_json_report
from .protocols import run_cross_validation
from .search import fit_automl

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2


def _load_table(data_path, schema_path):
    schema = TableSchema.from_json_file(schema_path)
    return load_csv(data_path, schema)


def _targets(table, task):
    if task == "classification":
        return table.target
    name = table.schema.target_column
    values = []
    for i, cell in enumerate(table.target, start=1):
        try:
            values.append(float(cell))
        except ValueError:
            raise CsvParseError(
                f"row {i}, column {name!r}: cannot parse {cell!r} as a number"
            ) from None
    return values


def _fit_from_args(args, table):
    encoder = FeatureEncoder.fit(table, min_frequency=args.min_category_count)
    features = encoder.transform(table)
    model, selection = fit_automl(
        features,
        _targets(table, args.task),
        args.task,
        mode=args.mode,
        ensemble_size=args.ensemble_size,
        seed=args.seed,
        n_threads=args.threads,
    )
    model.feature_encoder = encoder
    return model, selection


def cmd_train(args):
    table = _load_table(args.data, args.schema)
    model, selection = _fit_from_args(args, table)
    save_model(model, args.out)
    if args.report:
        write_json_report(
            args.report,
            {
                "dataset": Path(args.data).stem,
                "protocol": "train",
                "task": args.task,
                "training_seconds": selection.total_seconds,
                "selection": selection.to_dict(),
            },
        )
    chosen = selection.chosen
    print(
        f"trained {args.task} ensemble (E={args.ensemble_size}, mode={args.mode}): "
        f"neurons={chosen.neurons} alpha={chosen.alpha:.3g} "
        f"cv_score={max(r.mean_score for r in selection.results):.4f} "
        f"in {selection.total_seconds:.2f}s -> {args.out}"
    )
    return EXIT_OK


def _features_for_model(model, data_path):
    encoder = model.feature_encoder
    if encoder is None:
        raise ValueError(
            "model carries no feature encoding metadata; it was trained from "
            "matrices, not a schema'd CSV"
        )
    feature_names = {c.name for c in encoder.columns}
    with open(data_path, "r", encoding="utf-8", newline="") as fh:
        header = next(csv.reader(fh), None)
    if header is None:
        raise CsvParseError(f"{data_path}: file is empty")
    missing = [c.name for c in encoder.columns if c.name not in header]
    if missing:
        raise ValueError(
            f"{data_path}: expected feature columns {sorted(feature_names)} "
            f"but the file is missing {missing}"
        )
    from .data import ColumnSpec

    kinds = {c.name: c.kind for c in encoder.columns}
    columns = [ColumnSpec(name, kinds.get(name, "ignore")) for name in header]
    table = load_csv(data_path, TableSchema(tuple(columns)))
    return encoder.transform(table), table


def cmd_predict(args):
    model = load_model(args.model)
    features, _ = _features_for_model(model, args.data)
    if model.task == "classification":
        predictions = predict_labels(model, features)
    else:
        predictions = [repr(float(v)) for v in predict_regression(model, features)]
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["prediction"])
        for value in predictions:
            writer.writerow([value])
    print(f"wrote {len(predictions)} predictions -> {args.out}")
    return EXIT_OK


def cmd_evaluate(args):
    model = load_model(args.model)
    table = _load_table(args.data, args.schema)
    if model.feature_encoder is None:
        raise ValueError("model carries no feature encoding metadata")
    features = model.feature_encoder.transform(table)
    if model.task == "classification":
        predicted = predict_labels(model, features)
        classes = sorted(set(table.target) | set(model.codec.classes))
        index = {c: i for i, c in enumerate(classes)}
        cm = confusion_matrix(
            [index[v] for v in table.target], [index[v] for v in predicted], len(classes)
        )
        report = ClassificationReport.from_confusion(cm)
        doc = {"classes": classes, "confusion_matrix": cm.counts.tolist()}
        doc.update(report.to_dict())
        print(f"accuracy          {report.accuracy:.4f}")
        print(f"jaccard_min       {report.jaccard_min:.4f}")
        print(f"jaccard_variance  {report.jaccard_variance:.6f}")
        for cls, jac, f1 in zip(classes, report.jaccard, report.f1):
            print(f"  class {cls}: jaccard={jac:.4f} f1={f1:.4f}")
    else:
        y_true = np.asarray(_targets(table, "regression"))
        y_pred = predict_regression(model, features)
        report = RegressionReport.from_predictions(y_true, y_pred)
        doc = report.to_dict()
        print(f"pearson_r  {report.pearson_r:.4f}")
        print(f"rmse       {report.rmse:.4f}")
    if args.report:
        write_json_report(args.report, doc)
    return EXIT_OK


def cmd_cv(args):
    table = _load_table(args.data, args.schema)
    encoder = FeatureEncoder.fit(table, min_frequency=args.min_category_count)
    features = encoder.transform(table)
    report = run_cross_validation(
        features,
        _targets(table, args.task),
        args.task,
        mode=args.mode,
        folds=args.folds,
        augment=args.augment,
        ensemble_size=args.ensemble_size,
        seed=args.seed,
        n_threads=args.threads,
        dataset_id=Path(args.data).stem,
    )
    write_json_report(args.report, report)
    agg = report["aggregate"]
    if args.task == "classification":
        print(
            f"cv complete ({report['protocol']}): accuracy={agg['accuracy']:.4f} "
            f"jaccard_min={agg['jaccard_min']:.4f} "
            f"training_seconds={report['training_seconds']:.2f} -> {args.report}"
        )
    else:
        print(
            f"cv complete ({report['protocol']}): pearson_r={agg['pearson_r']:.4f} "
            f"rmse={agg['rmse']:.4g} "
            f"training_seconds={report['training_seconds']:.2f} -> {args.report}"
        )
    return EXIT_OK


def cmd_benchmark(args):
    report = run_benchmark(
        args.suite,
        data_dir=args.data_dir,
        mode=args.mode,
        seed=args.seed,
        ensemble_size=args.ensemble_size,
        n_threads=args.threads,
        manifest=args.manifest,
    )
    write_json_report(args.report, report)
    print(f"benchmark suite {args.suite!r} complete -> {args.report}")
    return EXIT_OK


def _add_common_fit_flags(parser):
    parser.add_argument("--task", required=True, choices=("classification", "regression"))
    parser.add_argument("--mode", default="fast", choices=("fast", "accurate"))
    parser.add_argument("--ensemble-size", type=int, default=7)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument(
        "--min-category-count",
        type=int,
        default=1,
        help="drop categorical values seen fewer times than this",
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="extreme-automl",
        description="Train and evaluate grid-searched ensembles of extreme learning machines.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="fit a model on a CSV file")
    p_train.add_argument("--data", required=True)
    p_train.add_argument("--schema", required=True)
    _add_common_fit_flags(p_train)
    p_train.add_argument("--out", required=True)
    p_train.add_argument("--report", default=None)
    p_train.set_defaults(func=cmd_train)

    p_predict = sub.add_parser("predict", help="predict with a saved model")
    p_predict.add_argument("--model", required=True)
    p_predict.add_argument("--data", required=True)
    p_predict.add_argument("--out", required=True)
    p_predict.set_defaults(func=cmd_predict)

    p_eval = sub.add_parser("evaluate", help="score a saved model against labeled data")
    p_eval.add_argument("--model", required=True)
    p_eval.add_argument("--data", required=True)
    p_eval.add_argument("--schema", required=True)
    p_eval.add_argument("--report", default=None)
    p_eval.set_defaults(func=cmd_evaluate)

    p_cv = sub.add_parser("cv", help="k-fold cross-validation")
    p_cv.add_argument("--data", required=True)
    p_cv.add_argument("--schema", required=True)
    _add_common_fit_flags(p_cv)
    p_cv.add_argument("--folds", type=int, default=5)
    p_cv.add_argument("--augment", action="store_true",
                      help="duplicate each training fold and add bounded noise to the copies")
    p_cv.add_argument("--report", required=True)
    p_cv.set_defaults(func=cmd_cv)

    p_bench = sub.add_parser("benchmark", help="run a published-benchmark suite")
    p_bench.add_argument("--suite", required=True, choices=SUITE_NAMES)
    p_bench.add_argument("--data-dir", default=None)
    p_bench.add_argument("--mode", default="accurate", choices=("fast", "accurate"))
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--ensemble-size", type=int, default=7)
    p_bench.add_argument("--threads", type=int, default=None)
    p_bench.add_argument("--manifest", default=None,
                         help="JSON file of sha256 digests to verify data files against")
    p_bench.add_argument("--report", required=True)
    p_bench.set_defaults(func=cmd_benchmark)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except Exception as exc:  # one-line diagnostic contract
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
