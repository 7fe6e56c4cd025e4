"""Command line front end: run comparison experiments, convert SVHN."""
import argparse
import sys
import time
from pathlib import Path

from .errors import ConfigError, FormatError
from .experiment import ExperimentSpec, render_table, run_experiment, write_report
from .svhn import convert_svhn


def cmd_run(args) -> int:
    spec = ExperimentSpec(
        raw_root=Path(args.raw), enhanced_root=Path(args.enhanced),
        seeds=tuple(args.seeds), epochs=args.epochs,
        batch_size=args.batch_size, learning_rate=args.learning_rate,
        subset_size=args.subset, test_subset_size=args.test_subset)
    started = time.perf_counter()
    report = run_experiment(spec)
    elapsed = time.perf_counter() - started
    print(render_table(report))
    print(f"trained {2 * len(spec.seeds)} runs in {elapsed:.1f}s")
    json_path, _ = write_report(report, args.out)
    print(f"report: {json_path}")
    return 0


def cmd_convert_svhn(args) -> int:
    counts = convert_svhn(args.source, args.out_root)
    for name in sorted(counts):
        print(f"{name}: {counts[name]}")
    print(f"total: {sum(counts.values())}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="edgebench",
        description="train the fixed small CNN on raw vs enhanced datasets")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a raw-vs-enhanced comparison")
    run.add_argument("--raw", required=True, help="variant root with train/ and test/")
    run.add_argument("--enhanced", required=True)
    run.add_argument("--out", required=True, help="directory for report.json and report.txt")
    run.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    run.add_argument("--epochs", type=int, default=3)
    run.add_argument("--batch-size", type=int, default=128)
    run.add_argument("--learning-rate", type=float, default=1e-3)
    run.add_argument("--subset", type=int, default=None,
                     help="train on only the first N items")
    run.add_argument("--test-subset", type=int, default=None)
    run.set_defaults(func=cmd_run)

    conv = sub.add_parser("convert-svhn", help="convert an SVHN .mat file to a class tree")
    conv.add_argument("source")
    conv.add_argument("out_root")
    conv.set_defaults(func=cmd_convert_svhn)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
