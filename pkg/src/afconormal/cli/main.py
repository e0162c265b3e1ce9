"""Command-line entry point: ``afconormal COMMAND FILE [flags]``."""

from __future__ import annotations

import argparse
import json
import os
import sys

from .commands import COMMANDS, EXIT_INPUT, FILE_COMMANDS, Flags, render_human, run
from .corpus import render_corpus, run_corpus
from .problem import ProblemError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="afconormal",
        description="Conormal spaces, Rees fibers and A_f certificates for polynomial families.",
        epilog="Exit codes: 0 verdict produced, 1 input error, 2 budget exceeded, 3 inconclusive, "
               "4 corpus mismatch.  Budgets default to AFCONORMAL_MAX_STEPS, AFCONORMAL_PRECISION "
               "and AFCONORMAL_ARC_DEGREE_BOUND when set.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--max-steps", type=int, help="Groebner reduction-step budget (default 10^6)")
    common.add_argument("--precision", type=int, help="truncation order N for arcs (default 64)")
    common.add_argument("--arc-degree-bound", type=int, help="max exponent of auto monomial arcs (default 8)")
    common.add_argument("--timing", action="store_true", help="append wall-clock time (outside the verdict)")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name in FILE_COMMANDS:
        p = sub.add_parser(name, parents=[common], help=f"run {name} on a problem file")
        p.add_argument("file")
    p = sub.add_parser("trotman", parents=[common], help="closed-form and arc check for w^a - y^b v^c - v^d")
    for letter in "abcd":
        p.add_argument(letter, type=int)
    p = sub.add_parser("run-corpus", parents=[common], help="run a directory of problems with .expect sidecars")
    p.add_argument("directory")
    p.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        return _main(argv)
    except BrokenPipeError:
        # reader went away (e.g. piped into head): drop the rest quietly
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0


def _main(argv: list[str] | None) -> int:
    args = build_parser().parse_args(argv)
    flags = Flags(args.max_steps, args.precision, args.arc_degree_bound, args.timing)
    if args.command == "run-corpus":
        try:
            summary = run_corpus(args.directory, flags, max(1, args.workers))
        except (ProblemError, OSError) as err:
            print(f"error: {err}", file=sys.stderr)
            return EXIT_INPUT
        print(json.dumps(summary, indent=2, sort_keys=True) if args.json else render_corpus(summary))
        return summary["exit_code"]
    assert args.command in COMMANDS
    target = (args.a, args.b, args.c, args.d) if args.command == "trotman" else args.file
    report = run(args.command, target, flags)
    if args.json:
        print(json.dumps(report.as_dict(), indent=2, sort_keys=True))
    else:
        out = sys.stdout if report.error is None else sys.stderr
        print(render_human(report), file=out)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
