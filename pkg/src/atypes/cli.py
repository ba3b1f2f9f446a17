"""Command-line entry point: ``atypes <command> ...``.

Exit codes: 0 success, 1 file or content error, 2 bad flags, 3 search
finished unsolved, 4 ``validate`` found violations.
"""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from . import harness
from .evolve import ALGORITHMS
from .graph import validate
from .sim import run
from .textio import ParseError, dump, parse

EXIT_OK, EXIT_FILE, EXIT_USAGE, EXIT_UNSOLVED, EXIT_INVALID = 0, 1, 2, 3, 4

log = logging.getLogger("atypes")


class _Failure(Exception):
    def __init__(self, message: str, code: int = EXIT_FILE):
        super().__init__(message)
        self.code = code


def parse_sequence(text: str, rightmost_first: bool = False) -> np.ndarray:
    """``"11;01;10"`` -> a (3, 2) array, earliest vector first.

    With ``rightmost_first`` the rightmost vector is the earliest.
    """
    parts = [p.strip() for p in text.split(";")]
    if not parts or any(not p for p in parts):
        raise ValueError(f"empty vector in {text!r}")
    if any(set(p) - {"0", "1"} for p in parts):
        raise ValueError(f"vectors must be bit strings, got {text!r}")
    if len({len(p) for p in parts}) != 1:
        raise ValueError("all vectors must have the same number of bits")
    if rightmost_first:
        parts.reverse()
    return np.array([[int(c) for c in p] for p in parts], np.uint8)


def format_sequence(seq: np.ndarray, rightmost_first: bool = False) -> str:
    rows = ["".join(str(int(b)) for b in row) for row in seq]
    if rightmost_first:
        rows.reverse()
    return ";".join(rows)


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="ascii") as fh:
            return fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise _Failure(f"{path}: {exc}") from None


# -- commands -------------------------------------------------------------


def cmd_validate(args) -> int:
    text = _read_text(args.file)
    try:
        atype = parse(text, check=False)
    except ParseError as exc:
        raise _Failure(f"{args.file}: {exc}") from None
    problems = validate(atype.graph)
    if not problems:
        print("valid")
        return EXIT_OK
    for v in problems:
        print(v)
    return EXIT_INVALID


def cmd_run(args) -> int:
    text = _read_text(args.file)
    try:
        atype = parse(text)
    except ParseError as exc:
        raise _Failure(f"{args.file}: {exc}") from None
    try:
        xs = parse_sequence(args.input, args.rightmost_first)
    except ValueError as exc:
        raise _Failure(f"--input: {exc}", EXIT_USAGE) from None
    if xs.shape[1] != atype.graph.input_dim:
        raise _Failure(
            f"--input: vectors have {xs.shape[1]} bits, network expects {atype.graph.input_dim}", EXIT_USAGE
        )
    out = run(atype, xs, args.out_len)
    print(format_sequence(out, args.rightmost_first))
    return EXIT_OK


def cmd_search(args) -> int:
    algo = harness.AlgoPlan(args.algo, args.algo, population_size=args.pop)
    record, result = harness.run_trial(
        args.task, args.n, algo, args.seed, args.max_attempts, timing=args.timing
    )
    if result is None:
        raise _Failure(f"search: {record.note}", EXIT_USAGE)
    print(",".join(record.row()))
    if args.out:
        try:
            harness.write_csv([record], args.out)
        except OSError as exc:
            raise _Failure(f"{args.out}: {exc}") from None
    if not record.solved:
        log.warning("no exact solution within %d attempts", args.max_attempts)
        return EXIT_UNSOLVED
    path = args.save or f"{args.task}{args.n}_{args.algo}_{args.seed}.atype"
    try:
        dump(result.solution, path)
    except OSError as exc:
        raise _Failure(f"{path}: {exc}") from None
    log.info("solution written to %s", path)
    return EXIT_OK


def cmd_experiment(args) -> int:
    text = _read_text(args.config)
    try:
        exp = harness.parse_experiment(text)
    except ValueError as exc:
        raise _Failure(f"{args.config}: {exc}") from None
    if args.timing:
        exp = harness.Experiment(**{**exp.__dict__, "timing": True})

    def progress(rec):
        log.info("done %s n=%d %s trial %d: attempts=%d solved=%d", rec.task, rec.n, rec.algorithm, rec.trial, rec.attempts, rec.solved)

    records = harness.run_experiment(exp, sink=progress)
    text = harness.records_to_csv(records)
    if args.out:
        try:
            with open(args.out, "w", newline="", encoding="ascii") as fh:
                fh.write(text)
        except OSError as exc:
            raise _Failure(f"{args.out}: {exc}") from None
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_claims(args) -> int:
    summary = harness.claim_search(args.which, args.attempts, np.random.default_rng(args.seed))
    print(summary.line())
    return EXIT_OK


def cmd_stats(args) -> int:
    try:
        records = harness.read_csv(args.input)
    except OSError as exc:
        raise _Failure(f"{args.input}: {exc}") from None
    except ValueError as exc:
        raise _Failure(str(exc)) from None
    print(harness.STATS_HEADER)
    for group in harness.summarize(records, args.confidence):
        print(group.line())
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def _positive(text: str) -> int:
    value = int(float(text)) if "e" in text.lower() else int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _non_negative(text: str) -> int:
    value = int(float(text)) if "e" in text.lower() else int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _level(text: str) -> float:
    value = float(text)
    if not 0.0 <= value < 1.0:
        raise argparse.ArgumentTypeError("must lie in [0, 1)")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="atypes", description="A-type networks and evolutionary search.")
    parser.add_argument("-v", "--verbose", action="store_true", help="progress messages on stderr")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("validate", help="check an A-type file against the graph rules")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("run", help="simulate an A-type on an input sequence")
    p.add_argument("file")
    p.add_argument("--input", required=True, help='bit-string vectors separated by ";", earliest first')
    p.add_argument("--out-len", type=_non_negative, required=True)
    p.add_argument("--paper-order", dest="rightmost_first", action="store_true", help="read and print sequences rightmost-earliest")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("search", help="run one search")
    p.add_argument("--task", required=True, choices=("identity", "multiplexer", "carry"))
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--algo", required=True, choices=ALGORITHMS)
    p.add_argument("--seed", type=_non_negative, required=True)
    p.add_argument("--max-attempts", type=_positive, default=10**6)
    p.add_argument("--pop", type=_positive, default=100)
    p.add_argument("--out", help="write the trial record as CSV")
    p.add_argument("--save", help="solution file (default <task><n>_<algo>_<seed>.atype)")
    p.add_argument("--timing", action="store_true", help="fill wall_ms (output is then not reproducible)")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("experiment", help="run a batch experiment from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--timing", action="store_true", help="fill wall_ms (output is then not reproducible)")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("claims", help="blind search over A-types without delay nodes")
    p.add_argument("--which", required=True, choices=sorted(harness.CLAIMS))
    p.add_argument("--attempts", type=_non_negative, required=True)
    p.add_argument("--seed", type=_non_negative, required=True)
    p.set_defaults(func=cmd_claims)

    p = sub.add_parser("stats", help="mean attempts with t-intervals per task, n and algorithm")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--confidence", type=_level, default=0.90)
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except _Failure as exc:
        print(f"atypes: {exc}", file=sys.stderr)
        if exc.code == EXIT_USAGE:
            parser.print_usage(sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
