"""Command-line front end: `product`, `correlator`, `verify`, `mode`, `expand`.

Exit status: 0 on success (every check holds), 1 when an identity fails,
2 on usage, configuration, parse or unsupported-expansion errors, and 3 when
a command crashes with an unexpected exception, after printing the traceback.
Progress and errors go to stderr; stdout is byte-deterministic for a given
configuration and command.
"""

from __future__ import annotations

import argparse
import sys
import traceback
from collections.abc import Sequence

from src.cli.expressions import ExpressionSyntaxError, parse_element
from src.config import ConfigError, Settings, build_algebra, load_settings
from src.freefield.algebra import PropagatorError
from src.freefield.correlators import correlator, wick_oracle
from src.models import SuiteSummary
from src.modes.residues import mode
from src.pipeline.suite import SUITES, UnknownSuiteError, run_suite
from src.session_logger import SessionLogger
from src.singfun.errors import (
    LiteralSyntaxError,
    SpecMismatchError,
    UnsupportedExpansionError,
    WindowError,
)
from src.singfun.laurent import RegionOrder, expand
from src.singfun.parsing import parse_function
from src.singfun.render import render_function
from src.singfun.spaces import SingularitySpec
from src.trees.rooted import TreeSyntaxError

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3

USAGE_ERRORS = (
    ConfigError,
    ExpressionSyntaxError,
    LiteralSyntaxError,
    PropagatorError,
    SpecMismatchError,
    TreeSyntaxError,
    UnknownSuiteError,
    UnsupportedExpansionError,
    WindowError,
)


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group("configuration (a --config file overrides these flags)")
    group.add_argument("--config", help="TOML file with [algebra], [run], [output], [parallelism]")
    group.add_argument("--dim", type=int, help="spacetime dimension d (default 1)")
    group.add_argument("--signature", help="metric signs, e.g. '+-' (default '+' then '-'s)")
    group.add_argument(
        "--propagator",
        help="x^-2, x^-3, 1/q or a one-point literal such as 'x1^-2' (default x^-2 / 1/q)",
    )
    group.add_argument("--cutoff", type=int, help="truncation cutoff (default 5)")
    group.add_argument("--degree", type=int, help="basis degree for verify (default 3)")
    group.add_argument("--seed", type=int, help="seed for sampled states (default 0)")
    group.add_argument("--format", choices=("text", "structured"), help="output format (default text)")
    group.add_argument("--workers", type=int, help="verify worker threads (default 4)")
    group.add_argument("--log-dir", dest="log_dir", help="write a JSONL verify log under this directory")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="vertex-ring",
        description="Exact computations in the free-field vertex algebra.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    product = commands.add_parser("product", parents=[common], help="print phi(x1)...phi(xk) 1")
    product.add_argument("points", type=int, metavar="K")

    corr = commands.add_parser("correlator", parents=[common], help="print Tr(phi(x1)...phi(xk))")
    corr.add_argument("points", type=int, metavar="K")
    corr.add_argument("--check-wick", action="store_true", help="compare with the pairing sum")

    verify = commands.add_parser("verify", parents=[common], help="run an identity suite")
    verify.add_argument("axiom", choices=SUITES)

    mode_cmd = commands.add_parser("mode", parents=[common], help="print a_n s")
    mode_cmd.add_argument("a", help="field expression, e.g. 'phi^2'")
    mode_cmd.add_argument("n", type=int)
    mode_cmd.add_argument("s", help="field expression")

    expand_cmd = commands.add_parser(
        "expand", parents=[common], help="expand a singular-function literal in a region"
    )
    expand_cmd.add_argument("literal", help="e.g. '(x1-x2)^-1'")
    expand_cmd.add_argument(
        "--order",
        help="points from outermost to innermost, e.g. '2,1' for |x2| >> |x1| (default 1,2,...)",
    )
    return parser


def _settings(args: argparse.Namespace) -> Settings:
    overrides = {
        key: getattr(args, key)
        for key in ("dim", "signature", "propagator", "cutoff", "degree", "seed", "format", "log_dir", "workers")
    }
    return load_settings(args.config, overrides)


# ----- commands ---------------------------------------------------------------


def cmd_product(args: argparse.Namespace, settings: Settings) -> int:
    if args.points < 0:
        raise ConfigError(f"K must be >= 0, got {args.points}")
    algebra = build_algebra(settings)
    state = algebra.product_at_points(args.points, settings.run.cutoff)
    if not settings.output.structured:
        print(state.render())
        return EXIT_OK
    rows = [(m, c) for m, c in state.items() if not c.is_zero]
    if not rows:
        print("monomial=1\tcoefficient=0")
    for mono, coeff in sorted(rows, key=lambda mc: (mc[0].degree, mc[0].display_key), reverse=True):
        print(f"monomial={mono.render()}\tcoefficient={render_function(coeff)}")
    return EXIT_OK


def cmd_correlator(args: argparse.Namespace, settings: Settings) -> int:
    if args.points < 0:
        raise ConfigError(f"K must be >= 0, got {args.points}")
    algebra = build_algebra(settings)
    value = correlator(algebra, args.points)
    structured = settings.output.structured
    print(f"correlator={render_function(value)}" if structured else render_function(value))
    if not args.check_wick:
        return EXIT_OK
    holds = value.equals(wick_oracle(algebra, args.points))
    verdict = "holds" if holds else "fails"
    print(f"wick={verdict}" if structured else f"wick: {verdict}")
    return EXIT_OK if holds else EXIT_FAILED


def _print_summary(summary: SuiteSummary, structured: bool) -> None:
    if structured:
        print(summary.render())
        return
    for report in summary.failed:
        print(report.render())
        print()
    total = len(summary.reports)
    print(f"{summary.suite}: {total - len(summary.failed)}/{total} hold")


def cmd_verify(args: argparse.Namespace, settings: Settings) -> int:
    algebra = build_algebra(settings)
    logger = SessionLogger(settings.output.log_dir) if settings.output.log_dir is not None else None
    summary = run_suite(
        args.axiom, algebra, settings.run, workers=settings.parallelism.workers, logger=logger
    )
    _print_summary(summary, settings.output.structured)
    return EXIT_OK if summary.all_hold else EXIT_FAILED


def cmd_mode(args: argparse.Namespace, settings: Settings) -> int:
    algebra = build_algebra(settings)
    a = parse_element(args.a, algebra.dim)
    s = parse_element(args.s, algebra.dim)
    result = mode(algebra, a, args.n, s, settings.run.cutoff)
    print(f"mode={result.render()}" if settings.output.structured else result.render())
    return EXIT_OK


def _region(order: str | None, num_points: int) -> RegionOrder:
    if order is None:
        return RegionOrder(tuple(range(num_points)))
    try:
        labels = [int(part) for part in order.split(",")]
    except ValueError:
        raise ConfigError(f"--order must be comma-separated point numbers, got {order!r}") from None
    if sorted(labels) != list(range(1, num_points + 1)):
        raise ConfigError(f"--order must list each of the points 1..{num_points} once, got {order!r}")
    return RegionOrder(tuple(p - 1 for p in labels))


def cmd_expand(args: argparse.Namespace, settings: Settings) -> int:
    spacetime = settings.algebra.spacetime
    if spacetime.dim != 1:
        raise UnsupportedExpansionError(f"region expansion needs d = 1, got d = {spacetime.dim}")
    f = parse_function(args.literal, spacetime, SingularitySpec())
    series = expand(f, _region(args.order, f.num_points), settings.run.cutoff)
    print(f"series={series}" if settings.output.structured else str(series))
    return EXIT_OK


COMMANDS = {
    "product": cmd_product,
    "correlator": cmd_correlator,
    "verify": cmd_verify,
    "mode": cmd_mode,
    "expand": cmd_expand,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        settings = _settings(args)
    except ConfigError as exc:
        print(f"Configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        return COMMANDS[args.command](args, settings)
    except USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception:  # noqa: BLE001
        print(f"{args.command} raised an unrecoverable error:", file=sys.stderr)
        traceback.print_exc()
        return EXIT_INTERNAL
