"""Command-line entry point: generate datasets, report stats, score predictions.

Exit codes: 0 on success, 2 on usage errors, 1 on IO/format/split errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import corpus, evaluator, stats
from ._version import __version__
from .corpus import Direction, SplitSpec


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scan-nacs",
        description="Generate, summarize, and score command/action datasets in either task direction.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    gen = sub.add_parser("generate", help="build a split and write train/test files plus a manifest")
    gen.add_argument("--direction", choices=[d.value for d in Direction], required=True)
    gen.add_argument("--split", choices=["simple", "length", "primitive"], required=True)
    gen.add_argument("--fraction", type=float, default=None,
                     help=f"train fraction for the simple split (default {corpus.DEFAULT_SIMPLE_FRACTION})")
    gen.add_argument("--seed", type=int, default=None, help="shuffle seed, required for the simple split")
    gen.add_argument("--threshold", type=int, default=None,
                     help=f"max train action length for the length split (default {corpus.DEFAULT_LENGTH_THRESHOLD})")
    gen.add_argument("--primitive", choices=list(corpus.PRIMITIVE_SPLIT_TOKENS), default=None,
                     help="which primitive the primitive split isolates")
    gen.add_argument("--out", type=Path, required=True, help="output directory")

    st = sub.add_parser("stats", help="write universe statistics and the standard split-size table")
    st.add_argument("--out", type=Path, required=True, help="output directory for stats.txt and stats.json")
    st.add_argument("--seed", type=int, default=1,
                    help="seed for the simple-split row (sizes are seed-independent)")

    ev = sub.add_parser("eval", help="score a predictions file against a dataset's test side")
    ev.add_argument("--dataset", type=Path, required=True, help="dataset directory")
    ev.add_argument("--predictions", type=Path, required=True,
                    help="one predicted target sequence per line, aligned with test.txt")
    ev.add_argument("--direction", choices=[d.value for d in Direction], default=None,
                    help="must match the dataset manifest; defaults to it")
    ev.add_argument("--report", type=Path, default=None, help="where to write the JSON report")
    ev.add_argument("--verdicts", action="store_true", help="include per-example verdicts in the report")
    return parser


def _split_spec(parser: argparse.ArgumentParser, args: argparse.Namespace) -> SplitSpec:
    direction = Direction(args.direction)
    used = {name: getattr(args, name) for name in ("fraction", "seed", "threshold", "primitive")}
    allowed = {"simple": ("fraction", "seed"), "length": ("threshold",), "primitive": ("primitive",)}
    for name, value in used.items():
        if value is not None and name not in allowed[args.split]:
            parser.error(f"--{name} does not apply to the {args.split} split")
    try:
        if args.split == "simple":
            fraction = corpus.DEFAULT_SIMPLE_FRACTION if args.fraction is None else args.fraction
            if args.seed is None:
                parser.error("the simple split requires --seed")
            return SplitSpec("simple", direction, fraction=fraction, seed=args.seed)
        if args.split == "length":
            threshold = corpus.DEFAULT_LENGTH_THRESHOLD if args.threshold is None else args.threshold
            return SplitSpec("length", direction, threshold=threshold)
        if args.primitive is None:
            parser.error("the primitive split requires --primitive")
        return SplitSpec("primitive", direction, primitive=args.primitive)
    except ValueError as exc:
        parser.error(str(exc))


def _cmd_generate(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    spec = _split_spec(parser, args)
    dataset = corpus.make_split(spec)
    corpus.write_dataset(dataset, args.out)
    print(f"wrote {args.out}: train {len(dataset.train)}, test {len(dataset.test)} "
          f"({spec.kind} split, {spec.direction.value})")
    return 0


def _standard_splits(seed: int) -> dict[str, corpus.Dataset]:
    universe = corpus.build_universe()
    direction = Direction.SCAN  # sizes do not depend on direction
    return {
        "simple@0.8": corpus.split_simple(
            SplitSpec("simple", direction, fraction=corpus.DEFAULT_SIMPLE_FRACTION, seed=seed), universe),
        "length@22": corpus.split_length(
            SplitSpec("length", direction, threshold=corpus.DEFAULT_LENGTH_THRESHOLD), universe),
        "primitive:jump": corpus.split_primitive(
            SplitSpec("primitive", direction, primitive="jump"), universe),
        "primitive:turn_left": corpus.split_primitive(
            SplitSpec("primitive", direction, primitive="turn_left"), universe),
    }


def _cmd_stats(args: argparse.Namespace) -> int:
    report = stats.summarize(corpus.build_universe(), _standard_splits(args.seed))
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "stats.txt").write_text(report.to_text(), encoding="utf-8")
    (args.out / "stats.json").write_text(report.to_json(), encoding="utf-8")
    print(f"wrote {args.out / 'stats.txt'} and {args.out / 'stats.json'}")
    print(f"commands {report.command_count}, distinct action sequences "
          f"{report.distinct_action_sequences}, max pre-image size {report.max_ambiguity}")
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    direction = None if args.direction is None else Direction(args.direction)
    report = evaluator.score_files(
        args.dataset, args.predictions, direction,
        report_path=args.report, include_verdicts=args.verdicts,
    )
    print(f"accuracy {report.correct}/{report.total} = {report.accuracy:.4f} "
          f"({report.direction.value})")
    for reason, count in sorted(report.reason_histogram().items()):
        print(f"  {reason}: {count}")
    if report.direction is Direction.NACS:
        print(f"  accepted non-gold commands: {report.accepted_non_gold}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.subcommand == "generate":
            return _cmd_generate(parser, args)
        if args.subcommand == "stats":
            return _cmd_stats(args)
        return _cmd_eval(args)
    except (OSError, ValueError) as exc:
        # Covers IO failures plus FormatViolation, DegenerateSplit, and
        # AlignmentError, all of which subclass ValueError.
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
