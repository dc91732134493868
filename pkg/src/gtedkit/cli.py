"""``gtedkit`` command line.  Exit status: 0 ok, 1 bad input, 2 bad config."""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

from . import evalkit, pipeline
from .gted import ConfigError, TransformationSet, alpha_transformation, gted_distance, similarity, threshold
from .opt import build_opt, format_oneline, format_tree
from .parser import ParseError, parse_theorem, to_sexpr
from .standardize import standardize
from .ted import ted_distance

EXIT_OK, EXIT_INPUT, EXIT_CONFIG = 0, 1, 2


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _tree(path: str):
    return build_opt(standardize(parse_theorem(_read(path))))


def _fmt_distance(d: float) -> str:
    return "inf" if math.isinf(d) else f"{d:g}"


def cmd_parse(args) -> int:
    print(to_sexpr(parse_theorem(_read(args.file))))
    return EXIT_OK


def cmd_tree(args) -> int:
    tree = _tree(args.file)
    print(format_oneline(tree) if args.oneline else format_tree(tree))
    return EXIT_OK


def cmd_distance(args) -> int:
    t1, t2 = _tree(args.a), _tree(args.b)
    print(f"distance\t{_fmt_distance(ted_distance(t1, t2))}")
    print(f"size_a\t{t1.size}")
    print(f"size_b\t{t2.size}")
    return EXIT_OK


def cmd_similarity(args) -> int:
    if not 0 <= args.theta <= 1:
        raise ConfigError(f"theta must lie in [0, 1], got {args.theta}")
    members = () if args.alpha == "off" else (alpha_transformation(args.alpha),)
    hset = TransformationSet(members, include_dumb_ops=not args.no_dumb_ops)
    t1, t2 = _tree(args.a), _tree(args.b)
    d = gted_distance(t1, t2, hset)
    s = similarity(t1, t2, hset, distance=d)
    print(f"distance\t{_fmt_distance(d)}")
    print(f"size_a\t{t1.size}")
    print(f"size_b\t{t2.size}")
    print(f"similarity\t{'undefined' if s is None else f'{s:.6f}'}")
    print(f"decision\t{'accept' if threshold(s, args.theta) else 'reject'}")
    return EXIT_OK


def _write_or_print(text: str, path) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_evaluate(args) -> int:
    config = pipeline.load_config(args.config, theta=args.theta)
    data = pipeline.load_dataset(args.dataset)
    run = pipeline.evaluate(data, config, workers=args.workers)
    _write_or_print(run.to_json() + "\n", config.report_path)
    summary = run.summary_csv()
    if config.summary_path:
        Path(config.summary_path).write_text(summary, encoding="utf-8")
    if config.report_path or not config.summary_path:
        sys.stdout.write(summary)
    return EXIT_OK


def cmd_sweep(args) -> int:
    try:
        grid = evalkit.theta_grid(args.thetas)
    except ValueError as e:
        raise ConfigError(f"bad theta grid {args.thetas!r}: {e}") from None
    config = pipeline.load_config(args.config)
    data = pipeline.load_dataset(args.dataset)
    try:
        points = pipeline.sweep_command(data, config, grid, workers=args.workers)
    except ValueError as e:
        if isinstance(e, pipeline.FormatError):
            raise
        raise ConfigError(str(e)) from None
    _write_or_print(evalkit.sweep_csv(points), args.output or config.sweep_path)
    return EXIT_OK


def cmd_baselines(args) -> int:
    data = pipeline.load_dataset(args.dataset)
    _, cm, rep = pipeline.baselines(data, args.metric, args.theta)
    fmt = rep.formatted()
    print("metric,tp,tn,fp,fn,precision,recall,accuracy,kappa")
    print(f"{args.metric},{cm.tp},{cm.tn},{cm.fp},{cm.fn},{fmt['precision']},{fmt['recall']},{fmt['accuracy']},{fmt['kappa']}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gtedkit", description="Operator-tree similarity for formal theorem statements.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="print the parse tree of a statement file")
    p.add_argument("file")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("tree", help="print the operator tree of a statement file")
    p.add_argument("file")
    p.add_argument("--oneline", action="store_true", help="bracketed label(child,...) form")
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("distance", help="tree edit distance between two statements")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("similarity", help="GTED similarity and decision for two statements")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--alpha", choices=("off", "rename-only", "scoped"), default="scoped")
    p.add_argument("--theta", type=float, default=pipeline.DEFAULT_THETA)
    p.add_argument("--no-dumb-ops", action="store_true")
    p.set_defaults(func=cmd_similarity)

    p = sub.add_parser("evaluate", help="score a JSON-lines dataset against human verdicts")
    p.add_argument("dataset")
    p.add_argument("--config")
    p.add_argument("--theta", type=float, help="overrides the config file")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", help="metrics across a grid of thresholds (CSV)")
    p.add_argument("dataset")
    p.add_argument("--thetas", default="0:1:0.1", help="start:stop:step or comma list")
    p.add_argument("--config")
    p.add_argument("--output", "-o")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("baselines", help="identity-match or BLEU baseline metrics")
    p.add_argument("dataset")
    p.add_argument("--metric", choices=("identity", "bleu"), default="identity")
    p.add_argument("--theta", type=float, default=0.5, help="BLEU acceptance threshold")
    p.set_defaults(func=cmd_baselines)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, ParseError, pipeline.FormatError, evalkit.EmptyInput, UnicodeDecodeError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
