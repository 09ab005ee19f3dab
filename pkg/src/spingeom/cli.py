"""Command-line interface: sweeps, figure data, Gauss-Bonnet reports and validation.

Exit codes: 0 success, 1 a check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__, geometry, sweep, validation
from .entanglement import DEFAULT_XI_PRIME_MAX
from .hilbert import SystemConfig

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _grid(text: str) -> sweep.Grid:
    try:
        return sweep.Grid.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _warn(message: str):
    print(f"warning: {message}", file=sys.stderr)


def _system_flags(parser: argparse.ArgumentParser):
    group = parser.add_argument_group("system")
    group.add_argument("--n", type=int, default=None, help="number of spins N (default 2)")
    group.add_argument("--twice-spin", type=int, default=None, help="2s, e.g. 1 for spin 1/2 (default 1)")
    group.add_argument("--coupling", type=float, default=None, help="Ising coupling J (default 1)")


def _output_flags(parser: argparse.ArgumentParser):
    group = parser.add_argument_group("output")
    group.add_argument("--out", default=None, help="output path (default: standard output)")
    group.add_argument("--format", choices=("csv", "json"), default="csv")
    group.add_argument("--jobs", type=int, default=1, help="worker processes for grid evaluation")


def _figure_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--xi-prime-max", type=float, default=DEFAULT_XI_PRIME_MAX,
                        help="small time horizon xi'_max (default 1e-3)")
    parser.add_argument("--c-count", type=int, default=101, help="points on C in [0, C_max]")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spingeom",
        description="Geometry, phases, speed limits and entanglement of N spin-s particles "
                    "under the long-range Ising interaction.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="evaluate a quantity on a parameter grid")
    p.add_argument("quantity", choices=sweep.QUANTITIES)
    _system_flags(p)
    p.add_argument("--theta", type=_grid, default=None, help="grid 'start:stop:count' or a single value")
    p.add_argument("--phi", type=_grid, default=None)
    p.add_argument("--xi", type=_grid, default=None)
    p.add_argument("--xi-max", type=float, default=None, help="cycle length for euler and aa_phase")
    p.add_argument("--epsilon", type=float, default=geometry.GAUSS_BONNET_EPSILON,
                   help="pole exclusion for euler")
    p.add_argument("--unwrap", action="store_true", help="continuous phases along xi")
    _figure_flags(p)
    _output_flags(p)

    for name in sweep.FIGURES:
        column = sweep.FIGURE_COLUMNS[name].replace("_", " ")
        p = sub.add_parser(name, help=f"{column} versus I-concurrence for s = 1/2, 1, 3/2, 2")
        _system_flags(p)
        p.add_argument("--xi", type=_grid, default=None, help="ignored: presets use xi = xi'_max")
        _figure_flags(p)
        _output_flags(p)

    p = sub.add_parser("euler", help="Gauss-Bonnet Euler characteristic report")
    _system_flags(p)
    p.add_argument("--xi-max", type=float, default=np.pi)
    p.add_argument("--epsilon", type=float, default=geometry.GAUSS_BONNET_EPSILON)
    p.add_argument("--tolerance", type=float, default=1e-2, help="allowed |chi - 2| (default 0.01)")
    _output_flags(p)

    p = sub.add_parser("brachistochrone", help="optimal evolution time on a xi grid")
    _system_flags(p)
    p.add_argument("--xi", type=_grid, default=None, help="grid of xi > 0 (default 1)")
    p.add_argument("--trivial", action="store_true", help="evaluate speed and distance at theta = pi/2")
    _output_flags(p)

    sub.add_parser("validate", help="run the oracle-equivalence battery")
    return parser


def _config(args, n_default=2, twice_default=1, coupling_default=1.0) -> SystemConfig:
    n = n_default if args.n is None else args.n
    ts = twice_default if args.twice_spin is None else args.twice_spin
    j = coupling_default if args.coupling is None else args.coupling
    try:
        return SystemConfig.create(n, ts, j)
    except ValueError as exc:
        raise UsageError(f"system: {exc}") from None


def _emit(result: sweep.SweepResult, args):
    text = sweep.render(result, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run_figure(name: str, args) -> sweep.SweepResult:
    if args.n not in (None, 2):
        _warn(f"{name} preset uses N = 2; ignoring --n {args.n}")
    if args.coupling not in (None, 1.0):
        _warn(f"{name} preset uses J = 1; ignoring --coupling {args.coupling}")
    if args.twice_spin is not None:
        _warn(f"{name} preset sweeps 2s in {sweep.FIGURE_TWICE_SPINS}; ignoring --twice-spin {args.twice_spin}")
    if getattr(args, "xi", None) is not None:
        _warn(f"{name} preset uses xi = xi'_max (tilde_xi = 1); ignoring --xi")
    if not args.xi_prime_max > 0:
        raise UsageError("xi_prime_max: must be positive")
    if args.c_count < 1:
        raise UsageError("c_count: must be a positive integer")
    return sweep.run_figure(name, xi_prime_max=args.xi_prime_max, c_count=args.c_count, jobs=args.jobs)


def _cmd_sweep(args) -> int:
    if args.quantity in sweep.FIGURES:
        _emit(_run_figure(args.quantity, args), args)
        return EXIT_OK
    config = _config(args)
    kwargs = {}
    for name in ("theta", "phi", "xi"):
        if getattr(args, name) is not None:
            kwargs[name] = getattr(args, name)
    if args.quantity == "brachistochrone" and "xi" not in kwargs:
        kwargs["xi"] = sweep.Grid.point(1.0)
    spec = sweep.SweepSpec(
        args.quantity, config, xi_max=args.xi_max, epsilon=args.epsilon, unwrap=args.unwrap,
        xi_prime_max=args.xi_prime_max, c_count=args.c_count, **kwargs,
    )
    _emit(sweep.run_sweep(spec, jobs=args.jobs), args)
    return EXIT_OK


def _cmd_euler(args) -> int:
    spec = sweep.SweepSpec("euler", _config(args), xi_max=args.xi_max, epsilon=args.epsilon)
    result = sweep.run_sweep(spec)
    result.metadata["tolerances"]["chi"] = args.tolerance
    _emit(result, args)
    chi = result.column("euler_characteristic")[0]
    if abs(chi - 2) > args.tolerance:
        print(f"FAIL: chi = {chi:.6f} differs from 2 by more than {args.tolerance}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _cmd_brachistochrone(args) -> int:
    grid = args.xi if args.xi is not None else sweep.Grid.point(1.0)
    spec = sweep.SweepSpec("brachistochrone", _config(args), xi=grid, trivial=args.trivial)
    _emit(sweep.run_sweep(spec, jobs=args.jobs), args)
    return EXIT_OK


def _cmd_validate(args) -> int:
    report = validation.validate_suite()
    sys.stdout.write(report.render())
    return EXIT_OK if report.passed else EXIT_FAIL


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be >= 1")
    try:
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command in sweep.FIGURES:
            _emit(_run_figure(args.command, args), args)
            return EXIT_OK
        if args.command == "euler":
            return _cmd_euler(args)
        if args.command == "brachistochrone":
            return _cmd_brachistochrone(args)
        if args.command == "validate":
            return _cmd_validate(args)
    except (UsageError, ValueError) as exc:
        print(f"spingeom {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    parser.error(f"unknown command {args.command!r}")
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
