# Copyright hweno-solver contributors. All Rights Reserved.

from __future__ import annotations

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from .analysis import format_table, list_references
from .data_classes import RunConfig
from .logging import get_logger
from .problems import problem_names

__all__ = ["main"]
_logger = logging.getLogger(__name__)

# Flags whose value goes straight into the run config under the same key.
_CONFIG_FLAGS = (
    "problem",
    "scheme",
    "nx",
    "ny",
    "cfl",
    "gamma0",
    "gamma1",
    "gamma2",
    "gamma_preset",
    "d0",
    "d1",
    "d2",
    "d_preset",
    "epsilon",
    "limiter_mode",
    "time_step",
    "out_dir",
)


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key=value file; flags override its values")
    parser.add_argument("--problem", help=f"one of: {', '.join(problem_names())}")
    parser.add_argument("--scheme", choices=["l-hweno", "weno-js"])
    parser.add_argument("--nx", type=int)
    parser.add_argument("--ny", type=int)
    parser.add_argument("--cfl", type=float)
    for i in range(3):
        parser.add_argument(f"--gamma{i}", type=float)
        parser.add_argument(f"--d{i}", type=float)
    parser.add_argument("--gamma-preset", choices=["default", "1", "2", "3"])
    parser.add_argument("--d-preset", choices=["default", "1", "2", "3"])
    parser.add_argument("--epsilon", type=float)
    parser.add_argument("--limiter-mode", choices=["staged", "off", "everywhere"])
    parser.add_argument("--time-step", choices=["auto", "cfl", "accuracy"])
    parser.add_argument("--out-dir")
    parser.add_argument("--verbose", action="store_true", help="log every solver progress line")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hweno", description="Hermite WENO solvers for hyperbolic conservation laws"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="solve one problem on one grid")
    _add_config_flags(run)
    run.add_argument("--emit-fields", action="store_true", help="also write derivative fields")

    conv = commands.add_parser("convergence", help="error and order table over several grids")
    _add_config_flags(conv)
    conv.add_argument("--grids", type=int, nargs="+", required=True)
    conv.add_argument("--schemes", nargs="+", choices=["l-hweno", "weno-js"])

    ref = commands.add_parser("reference", help="generate or list cached reference solutions")
    ref.add_argument("--problem")
    ref.add_argument("--out-dir", default="hweno-out")
    ref.add_argument("--force", action="store_true", help="regenerate even when cached")
    ref.add_argument("--list", action="store_true", help="list cached references")
    ref.add_argument("--verbose", action="store_true")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """
    Raises:
        RunConfigError: When the file or the flags hold invalid settings.
    """
    base = RunConfig.from_file(args.config) if args.config else RunConfig()
    overrides: Dict[str, Any] = {key: getattr(args, key, None) for key in _CONFIG_FLAGS}
    if getattr(args, "emit_fields", False):
        overrides["emit_fields"] = True
    return base.merged(overrides)


def _run(args: argparse.Namespace) -> int:
    from .runner import run

    report = run(config_from_args(args))
    print(format_table(report))
    return 0 if all(r.healthy for r in report.results) else 1


def _convergence(args: argparse.Namespace) -> int:
    from .runner import convergence

    reports = convergence(config_from_args(args), args.grids, args.schemes)
    for report in reports:
        print(format_table(report))
    return 0 if all(r.healthy for rep in reports for r in rep.results) else 1


def _reference(args: argparse.Namespace) -> int:
    from .runner import reference

    if args.list:
        for path in list_references(args.out_dir):
            print(path)
        return 0
    if not args.problem:
        _logger.error("reference needs --problem or --list")
        return 1
    print(reference(args.problem, args.out_dir, force=args.force))
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logger = get_logger("hweno")
    logger.setLevel(logging.DEBUG if args.verbose else logging.INFO)

    handlers = {"run": _run, "convergence": _convergence, "reference": _reference}
    try:
        return handlers[args.command](args)
    except Exception as e:
        _logger.error(f"{args.command} failed: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
