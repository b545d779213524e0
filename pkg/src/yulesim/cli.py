"""Command-line pipeline driver.

Subcommands:

* ``simulate``  run the urn process; emit a histogram CSV or a synthetic trace
* ``trace``     reduce an access log to a unique-visitors histogram (+ summary)
* ``fit``       fit the visitor-count exponent (OLS log-log or Yule-Simon MLE)
* ``theory``    emit exact pmf/ccdf curves (and the nu -> alpha mapping)
* ``rank``      rank sites by visitor count and fit the Zipf exponent

Every command is a pure function of its flags and inputs: identical
invocations produce byte-identical output.  Data goes to ``--out`` (default
standard output); diagnostics go to standard error.  Exit codes: 0 success,
1 I/O failure, 2 usage or format error, 3 insufficient data.
"""

from __future__ import annotations

import argparse
import math
import sys
from contextlib import contextmanager

from .errors import (
    BoundaryFitError,
    DomainError,
    FormatError,
    InsufficientDataError,
    WindowError,
)
from .estimators import INCONSISTENT, fit_mle_yule, fit_ols_loglog, fit_zipf, rank_table
from .formats import fmt12, read_histogram, write_histogram
from .traces import FormatSpec, ParseStats, TimeWindow, parse_trace, synthesize_trace, unique_visitors
from .urn import SimConfig, run
from .yule import alpha_from_nu, theory_rows

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_NODATA = 3


@contextmanager
def _in_stream(path: str):
    if path == "-":
        yield sys.stdin
    else:
        with open(path, "r", encoding="utf-8") as f:
            yield f


@contextmanager
def _out_stream(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            yield f


def _nu_bound(nu: float) -> str:
    """Smallest one-decimal upper bound X with nu < X, as a string."""
    bound = math.ceil(nu * 10.0) / 10.0
    if bound <= nu:
        bound += 0.1
    return f"{bound:.1f}"


def _warn(message: str) -> None:
    print(f"warning: {message}", file=sys.stderr)


def cmd_simulate(args: argparse.Namespace) -> int:
    config = SimConfig(nu=args.nu, steps=args.steps, seed=args.seed)
    with _out_stream(args.out) as out:
        if args.emit == "histogram":
            write_histogram(run(config), out)
        else:
            synthesize_trace(config, out)
    return EXIT_OK


def _parse_window(text: str) -> TimeWindow:
    if ":" not in text:
        raise DomainError(f"window must look like start:end, got {text!r}")
    start_text, _, end_text = text.partition(":")
    try:
        start = int(start_text) if start_text else None
        end = int(end_text) if end_text else None
    except ValueError:
        raise DomainError(f"window bounds must be integers, got {text!r}") from None
    return TimeWindow(start=start, end=end)


def cmd_trace(args: argparse.Namespace) -> int:
    fmt = FormatSpec(
        delimiter=args.delimiter,
        columns=tuple(c.strip() for c in args.columns.split(",")),
        site_is_url=args.url_sites,
    )
    window = _parse_window(args.window) if args.window else TimeWindow()
    stats = ParseStats()
    try:
        with _in_stream(args.input) as lines, _out_stream(args.out) as out:
            hist, summary = unique_visitors(parse_trace(lines, fmt, stats), window)
            write_histogram(hist, out)
    except FormatError as exc:
        print(f"records={stats.records} skipped={stats.skipped}", file=sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(
        f"users={summary.users} sites={summary.sites} "
        f"records={stats.records} skipped={stats.skipped}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_fit(args: argparse.Namespace) -> int:
    with _in_stream(args.input) as lines:
        hist = read_histogram(lines)
    if args.method == "ols":
        fit = fit_ols_loglog(hist, n_min=args.nmin, binning=args.binning)
    else:
        fit = fit_mle_yule(hist, n_min=args.nmin)
    with _out_stream(args.out) as out:
        out.write(fit.serialize() + "\n")
        if isinstance(fit.nu_implied, float):
            out.write(f"implied_nu={fmt12(fit.nu_implied)} nu < {_nu_bound(fit.nu_implied)}\n")
    if fit.nu_implied == INCONSISTENT:
        _warn(
            f"fitted exponent {fit.alpha:.4g} lies below 2; the implied novelty "
            "rate would be negative (inconsistent with the model)"
        )
    return EXIT_OK


def cmd_theory(args: argparse.Namespace) -> int:
    if args.max_n < 1:
        raise DomainError(f"--max-n must be >= 1, got {args.max_n}")
    with _out_stream(args.out) as out:
        if args.nu is not None:
            alpha = alpha_from_nu(args.nu)
            out.write(f"nu={fmt12(args.nu)} alpha={fmt12(alpha)}\n")
        else:
            alpha = args.alpha
        out.write("n,pmf,ccdf\n")
        for row in theory_rows(alpha, args.max_n):
            out.write(row + "\n")
    return EXIT_OK


def cmd_rank(args: argparse.Namespace) -> int:
    with _in_stream(args.input) as lines:
        hist = read_histogram(lines)
    table = rank_table(hist)
    with _out_stream(args.out) as out:
        out.write("rank,visitors\n")
        for row in table:
            out.write(f"{row.rank},{row.visitors}\n")
        try:
            fit = fit_zipf(table, rank_min=args.rank_min, rank_max=args.rank_max)
        except (DomainError, InsufficientDataError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_NODATA
        out.write(fit.serialize() + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="yulesim",
        description="Simulate, analyze, and fit recommendation-driven site-visit data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run the urn process")
    p.add_argument("--nu", type=float, required=True, help="novelty rate in [0, 1)")
    p.add_argument("--steps", type=int, required=True, help="number of time steps (visits)")
    p.add_argument("--seed", type=int, required=True, help="64-bit unsigned RNG seed")
    p.add_argument(
        "--emit", choices=("histogram", "trace"), default="histogram",
        help="write the visitor-count histogram (default) or a synthetic trace",
    )
    p.add_argument("--out", default="-", help="output path, '-' for stdout (default)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("trace", help="reduce an access log to a unique-visitors histogram")
    p.add_argument("--input", default="-", help="trace file, '-' for stdin (default)")
    p.add_argument("--delimiter", default=",", help="field delimiter (default ',')")
    p.add_argument(
        "--columns", default="user,site,timestamp",
        help="comma-separated column order (names: user, site, timestamp)",
    )
    p.add_argument(
        "--url-sites", action="store_true",
        help="treat the site column as a full URL; group by lowercased host",
    )
    p.add_argument("--window", default=None, help="half-open time window start:end")
    p.add_argument("--out", default="-", help="histogram output path, '-' for stdout")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("fit", help="fit the visitor-count exponent")
    p.add_argument("--input", default="-", help="histogram CSV, '-' for stdin (default)")
    p.add_argument("--method", choices=("ols", "mle"), required=True)
    p.add_argument("--nmin", type=int, default=1, help="smallest visitor count used (default 1)")
    p.add_argument(
        "--binning", choices=("raw", "logarithmic"), default="logarithmic",
        help="OLS point construction (default logarithmic; ignored for mle)",
    )
    p.add_argument("--out", default="-", help="output path, '-' for stdout (default)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("theory", help="emit exact pmf/ccdf curves")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--alpha", type=float, help="power-law exponent (> 1)")
    group.add_argument("--nu", type=float, help="novelty rate; mapped to alpha first")
    p.add_argument("--max-n", type=int, required=True, help="largest visitor count tabulated")
    p.add_argument("--out", default="-", help="output path, '-' for stdout (default)")
    p.set_defaults(func=cmd_theory)

    p = sub.add_parser("rank", help="rank sites and fit the Zipf exponent")
    p.add_argument("--input", default="-", help="histogram CSV, '-' for stdin (default)")
    p.add_argument("--rank-min", type=int, default=10, help="first rank fitted (default 10)")
    p.add_argument(
        "--rank-max", type=int, default=None,
        help="last rank fitted (default min(1000, table size))",
    )
    p.add_argument("--out", default="-", help="output path, '-' for stdout (default)")
    p.set_defaults(func=cmd_rank)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InsufficientDataError, BoundaryFitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NODATA
    except (DomainError, FormatError, WindowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
