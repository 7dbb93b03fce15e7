"""Command line entry point.

    slicecalc check [--function NAME | --function series:PATH ...] [--grid SPEC]
                    [--step S] [--tol T] [--seed N] [--report out.json]
                    [--csv out.csv] [--trace]
    slicecalc list

Exit status of ``check``: 0 when every function behaves as expected,
2 on expectation violations, 1 on configuration errors.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import series as series_mod
from .harness.catalog import builtin_catalog, series_entry
from .harness.grid import GridError, parse_grid
from .harness.report import write_csv, write_json
from .harness.runner import RunConfig, run

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VIOLATION = 2


class ConfigError(Exception):
    pass


def _select(names: list[str] | None, seed: int):
    catalog = builtin_catalog()
    if not names:
        return catalog
    by_name = {e.name: e for e in catalog}
    out = []
    for name in names:
        if name.startswith("series:"):
            path = name[len("series:"):]
            try:
                s = series_mod.load(path)
            except (OSError, ValueError) as exc:
                raise ConfigError(f"cannot load series {path!r}: {exc}") from exc
            out.append(series_entry(f"series:{path}", s))
        elif name in by_name:
            out.append(by_name[name])
        else:
            raise ConfigError(f"unknown function {name!r}; known: {', '.join(by_name)}")
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slicecalc",
        description="Numerically certify or refute S-derivability of quaternionic functions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run all checks over a grid")
    check.add_argument("--function", action="append", metavar="NAME|series:PATH",
                       help="catalog name or series file; repeatable (default: whole catalog)")
    check.add_argument("--grid", default="default", help="grid spec string (default: %(default)s)")
    check.add_argument("--step", type=float, default=RunConfig.step,
                       help="base finite-difference step (default: %(default)s)")
    check.add_argument("--tol", type=float, default=RunConfig.tol,
                       help="finite-difference residual tolerance (default: %(default)s)")
    check.add_argument("--seed", type=int, default=0, help="seed for random grid points and probes")
    check.add_argument("--report", metavar="PATH", help="write the JSON report here")
    check.add_argument("--csv", metavar="PATH", help="write a flat CSV of rows here")
    check.add_argument("--trace", action="store_true", help="include convergence traces")
    check.add_argument("-v", "--verbose", action="store_true")

    sub.add_parser("list", help="list the builtin catalog")
    return parser


def _check(args) -> int:
    if args.step <= 0 or args.tol <= 0:
        raise ConfigError("--step and --tol must be positive")
    try:
        grid = parse_grid(args.grid, seed=args.seed)
    except GridError as exc:
        raise ConfigError(f"bad --grid: {exc}") from exc
    catalog = _select(args.function, args.seed)
    config = RunConfig(step=args.step, tol=args.tol, seed=args.seed, trace=args.trace)
    result = run(catalog, grid, config)

    for fr in result.functions:
        s = fr.summary()
        status = "ok" if s["violation"] is None else f"VIOLATION: {s['violation']}"
        print(f"{fr.entry.name:<12} {fr.entry.describe_expectation():<28} "
              f"rows={s['rows']:<5} failed={s['failed']:<5} skipped={s['skipped']:<5} {status}")
    print(f"{len(result.functions)} functions, {result.violations} expectation violations")

    if args.report:
        write_json(result, args.report)
    if args.csv:
        write_csv(result, args.csv)
    return EXIT_OK if result.violations == 0 else EXIT_VIOLATION


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors, which would read as a violation
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "list":
        for e in builtin_catalog():
            print(f"{e.name:<10} {e.describe_expectation():<28} {e.notes}")
        return EXIT_OK
    try:
        return _check(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
