"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import re
import sys
from pathlib import Path

from . import config as defaults
from .cart import extract_rules
from .config import CartParams, LogisticFitParams, PipelineConfig
from .errors import DataError, NumericalError
from .pipeline import (
    MODEL_NAMES,
    batch_summary_csv,
    evaluate_bundle,
    load_input,
    preprocess,
    run_batch,
    run_clustering,
    run_eda,
    run_experiment,
    train_bundle,
    write_evaluations,
    write_text,
)
from .data import train_test_split
from .store import dumps, load_bundle

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _seed_range(text: str) -> range:
    m = re.fullmatch(r"(-?\d+)\.\.(-?\d+)", text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}")
    a, b = int(m[1]), int(m[2])
    if b < a:
        raise argparse.ArgumentTypeError(f"empty seed range {text!r}")
    return range(a, b + 1)


def _add_input(p):
    p.add_argument("--input", type=Path, help="UCI wdbc.data file (default: bundled copy)")
    p.add_argument("--out", type=Path, default=Path("out"), help="output directory")


def _add_split(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--train-count", type=int, default=defaults.TRAIN_COUNT)


def _add_features(p):
    p.add_argument("--tau", type=float, default=defaults.CORRELATION_TAU)
    p.add_argument("--pivot", default=defaults.CORRELATION_PIVOT)


def _add_models(p):
    p.add_argument("--with-cluster-feature", action="store_true")
    p.add_argument("--no-scale", action="store_true", help="train on unscaled features")
    p.add_argument("--max-depth", type=int, default=defaults.CART_MAX_DEPTH)
    p.add_argument("--min-leaf", type=int, default=defaults.CART_MIN_LEAF)
    p.add_argument("--l2", type=float, default=defaults.LOGIT_L2)
    p.add_argument("--created", help="provenance timestamp to record in the bundle")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="histoclass", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eda", help="descriptive statistics, outliers, normality, correlation")
    _add_input(p)

    p = sub.add_parser("preprocess", help="split, min-max scale and prune correlated features")
    _add_input(p)
    _add_split(p)
    _add_features(p)

    p = sub.add_parser("cluster", help="two-cluster k-means reports")
    _add_input(p)
    _add_split(p)

    p = sub.add_parser("train", help="fit CART and logistic models into a bundle")
    _add_input(p)
    _add_split(p)
    _add_features(p)
    _add_models(p)
    p.add_argument("--emit-rules", action="store_true", help="write and print the CART rule listing")

    p = sub.add_parser("evaluate", help="score the test partition with a saved bundle")
    _add_input(p)
    p.add_argument("--bundle", type=Path, help="model bundle (default: OUT/model.json)")
    p.add_argument("--model", choices=[*MODEL_NAMES, "all"], default="all")
    p.add_argument("--seed", type=int, help="split seed (default: from bundle)")
    p.add_argument("--train-count", type=int, help="train size (default: from bundle)")

    p = sub.add_parser("predict", help="predict every record of an input file")
    _add_input(p)
    p.add_argument("--bundle", type=Path, required=True)
    p.add_argument("--model", choices=list(MODEL_NAMES), default="ensemble")

    p = sub.add_parser("reproduce", help="run the whole pipeline for one seed or a seed range")
    _add_input(p)
    _add_split(p)
    _add_features(p)
    _add_models(p)
    p.add_argument("--emit-rules", action="store_true")
    p.add_argument("--seeds", type=_seed_range, help="seed range A..B (inclusive)")
    return parser


def _config(args) -> PipelineConfig:
    try:
        return PipelineConfig(
            input=args.input,
            seed=args.seed if getattr(args, "seed", None) is not None else 0,
            train_count=(
                args.train_count
                if getattr(args, "train_count", None) is not None
                else defaults.TRAIN_COUNT
            ),
            pivot=getattr(args, "pivot", defaults.CORRELATION_PIVOT),
            tau=getattr(args, "tau", defaults.CORRELATION_TAU),
            scale=not getattr(args, "no_scale", False),
            with_cluster_feature=getattr(args, "with_cluster_feature", False),
            cart=CartParams(
                max_depth=getattr(args, "max_depth", defaults.CART_MAX_DEPTH),
                min_leaf=getattr(args, "min_leaf", defaults.CART_MIN_LEAF),
            ),
            logistic=LogisticFitParams(l2=getattr(args, "l2", defaults.LOGIT_L2)),
            out=args.out,
            created=getattr(args, "created", None),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_eda(args):
    ds = load_input(args.input)
    report = run_eda(ds)
    report.write(args.out)
    failing = report.normality.failing()
    print(f"{len(ds)} samples, {len(report.outliers.entries)} outlier cells, "
          f"normality failures: {', '.join(failing) or 'none'}")


def cmd_preprocess(args):
    cfg = _config(args)
    pre = preprocess(load_input(cfg.input), cfg)
    pre.write(args.out, cfg.scale)
    print(f"train {len(pre.split.train)}, test {len(pre.split.test)}; "
          f"dropped {', '.join(pre.drops.dropped) or 'none'}; kept {', '.join(pre.selected)}")


def cmd_cluster(args):
    cfg = _config(args)
    pre = preprocess(load_input(cfg.input), cfg)
    report = run_clustering(pre.scaled_train, cfg.seed)
    report.write(args.out)
    for p in report.purity:
        print(f"cluster {p.cluster}: {p.count_A} A / {p.count_N} N (N share {p.share_N:.3f})")


def cmd_train(args):
    cfg = _config(args)
    pre = preprocess(load_input(cfg.input), cfg)
    cluster = run_clustering(pre.scaled_train, cfg.seed) if cfg.with_cluster_feature else None
    bundle = train_bundle(pre, cluster, cfg)
    write_text(Path(args.out) / "model.json", dumps(bundle))
    if args.emit_rules:
        rules = extract_rules(bundle.cart)
        write_text(Path(args.out) / "rules.txt", rules + "\n")
        print(rules)
    print(f"wrote {Path(args.out) / 'model.json'}")


def cmd_evaluate(args):
    bundle_path = args.bundle or Path(args.out) / "model.json"
    bundle = load_bundle(bundle_path)
    seed = bundle.provenance.seed if args.seed is None else args.seed
    train_count = bundle.provenance.train_count if args.train_count is None else args.train_count
    split = train_test_split(load_input(args.input), train_count, seed)
    models = MODEL_NAMES if args.model == "all" else (args.model,)
    evals = evaluate_bundle(bundle, split.test, models)
    table = write_evaluations(evals, args.out)
    print(table.to_text(), end="")


def cmd_predict(args):
    bundle = load_bundle(args.bundle)
    ds = load_input(args.input)
    evals = evaluate_bundle(bundle, ds, (args.model,))
    write_text(Path(args.out) / "predictions.csv", evals[args.model].predictions_csv())
    print(f"wrote {len(ds)} predictions to {Path(args.out) / 'predictions.csv'}")


def cmd_reproduce(args):
    cfg = _config(args)
    if args.seeds is not None:
        experiments = run_batch(cfg, args.seeds)
        for exp in experiments:
            exp.write(Path(args.out) / f"seed_{exp.config.seed}")
        write_text(Path(args.out) / "summary.csv", batch_summary_csv(experiments))
        print(f"wrote {len(experiments)} experiments and {Path(args.out) / 'summary.csv'}")
        return
    exp = run_experiment(cfg)
    exp.write(args.out)
    if args.emit_rules:
        print(exp.rules)
    for name, ev in exp.evaluations.items():
        print(f"{name}: {ev.confusion.matrix}")
    print(exp.comparison.to_text(), end="")


COMMANDS = {
    "eda": cmd_eda,
    "preprocess": cmd_preprocess,
    "cluster": cmd_cluster,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "predict": cmd_predict,
    "reproduce": cmd_reproduce,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"histoclass: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"histoclass: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DataError, OSError) as exc:
        print(f"histoclass: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
