#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Command line interface: ``loewner <command> [options]``.

Commands:
- forward   solve the Loewner equation for a driving JSON and write the trace
- zip       extract the driving function of a curve CSV
- whitney   standard Whitney squares meeting a hull, with the Whitney area
- analyze   distortion, Hölder or John report of a saved chain
- modulus   discrete modulus of a problem JSON
- harness   run scenario suites and write reports

Every path may be local or an s3:// URI.
"""

import argparse
import sys
from typing import List, Optional

import numpy as np
import pandas as pd

from . import __version__
from .config import load_config
from .core_model import resample_driving
from .exceptions import LoewnerLabError
from .utils import io_utils


def _add_config(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None, help="Configuration JSON merged over the defaults")
    parser.add_argument("-v", "--verbose", action="store_true", help="Print progress messages")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loewner",
        description="Numerical Loewner chains: forward solver, zipper, Whitney "
                    "geometry, metric checks, discrete modulus and scenario harness.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("forward", help="Solve the Loewner equation for a driving function")
    p.add_argument("--driving", required=True, help="Driving JSON")
    p.add_argument("--steps", type=int, default=None, help="Number of steps N (N+1 samples)")
    p.add_argument("--kind", choices=["vertical", "tilted"], default=None, help="Elementary step")
    p.add_argument("--trace", action="store_true", help="Compute and write the trace")
    p.add_argument("--out", required=True, help="Trace CSV (t,re,im)")
    p.add_argument("--chain", default=None, help="Also write the chain JSON")
    p.add_argument("--svg", default=None, help="Trace plot")
    _add_config(p)

    p = sub.add_parser("zip", help="Extract the driving function of a simple curve")
    p.add_argument("--curve", required=True, help="Curve CSV (re,im)")
    p.add_argument("--out", required=True, help="Driving JSON")
    p.add_argument("--kind", choices=["vertical", "tilted"], default=None, help="Elementary step")
    p.add_argument("--profile", type=float, default=None, metavar="DELTA",
                   help="Also write the transition-diameter profile for window DELTA")
    p.add_argument("--chain", default=None, help="Also write the fitted chain JSON")
    _add_config(p)

    p = sub.add_parser("whitney", help="Standard Whitney squares meeting a hull")
    p.add_argument("--hull", default=None, help="Curve CSV; the half-plane when omitted")
    p.add_argument("--filled", action="store_true", help="Treat the curve as a closed outline")
    p.add_argument("--jmin", type=int, default=None, help="Smallest square level")
    p.add_argument("--out", required=True, help="Squares CSV (j,k_or_cx,cy,side)")
    p.add_argument("--svg", default=None, help="Square plot")
    _add_config(p)

    p = sub.add_parser("analyze", help="Metric report of a saved chain")
    p.add_argument("--chain", required=True, help="Chain JSON written by forward or zip")
    p.add_argument("--suite", choices=["distortion", "holder", "john"], required=True)
    p.add_argument("--time", type=float, default=None, help="Capacity time (default T)")
    p.add_argument("--out", required=True, help="Report JSON")
    _add_config(p)

    p = sub.add_parser("modulus", help="Discrete modulus of a curve family")
    p.add_argument("--problem", required=True, help="Problem JSON (hull, filled, E, F, bbox)")
    p.add_argument("--grid", type=int, default=None, help="Cells along the longer side")
    p.add_argument("--out", required=True, help="Result JSON")
    p.add_argument("--svg", default=None, help="Density heat map")
    _add_config(p)

    p = sub.add_parser("harness", help="Run scenario suites")
    p.add_argument("--suite", choices=["slit", "johnprop", "nonslit", "subinv", "brownian"],
                   default=None, help="Restrict to one suite")
    p.add_argument("--out", required=True, help="Report directory")
    p.add_argument("--svg", action="store_true", help="Write ω(δ) plots for slit reports")
    p.add_argument("--jobs", type=int, default=None, help="Parallel scenario jobs")
    _add_config(p)
    return parser


def cmd_forward(args, config) -> int:
    from .forward_solver import ForwardSolver

    d = io_utils.read_driving(args.driving, None if args.steps is None else args.steps + 1)
    if args.steps is not None and d.grid.n != args.steps + 1:
        d = resample_driving(d, args.steps + 1)
    solver = ForwardSolver(config, verbose=args.verbose)
    e = solver.solve_forward(d, args.kind, trace=args.trace or bool(args.svg))
    trace = e.trace if e.trace is not None else np.full(e.grid.n, np.nan + 0j)
    io_utils.write_trace(e.grid.t_values, trace, args.out)
    if args.chain:
        io_utils.write_chain(e, args.chain)
    if args.svg:
        from .visualization import LoewnerVisualization

        LoewnerVisualization(verbose=args.verbose).plot_trace(e, save_path=args.svg)
    return 0


def cmd_zip(args, config) -> int:
    from .inverse_solver import ZipperSolver

    curve = io_utils.read_curve(args.curve)
    solver = ZipperSolver(config, verbose=args.verbose)
    result = solver.extract_driving(curve, args.kind)
    io_utils.write_driving(result.driving, args.out)
    if args.chain:
        io_utils.write_chain(result.to_evolution(), args.chain)
    if args.profile is not None:
        profile = solver.transition_diameter_profile(result, args.profile)
        base = args.out[:-5] if args.out.endswith(".json") else args.out
        with io_utils.open_path(f"{base}_profile.csv", "w") as fh:
            profile.to_csv(fh, index=False)
        print(f"omega2({args.profile:g}) = {profile.attrs['omega2']:.6g}")
    print(f"T = {result.T:.6g}, {result.driving.grid.n} samples")
    return 0


def cmd_whitney(args, config) -> int:
    from .whitney import WhitneyGeometry

    hull = None
    if args.hull:
        hull = io_utils.read_curve(args.hull, simple=not args.filled, filled=args.filled)
    geometry = WhitneyGeometry(config, verbose=args.verbose)
    j_min = args.jmin if args.jmin is not None else (geometry.default_jmin(hull) if hull else -20)
    squares = geometry.standard_squares_meeting(hull, j_min)
    io_utils.write_squares(squares.to_frame(), args.out)
    area = geometry.whitney_area(hull, j_min)
    print(f"{len(squares)} squares, Area_W = {area:.12g}")
    if hull is not None:
        estimate = geometry.hcap_estimate(hull)
        print(f"hcap in [{estimate['low']:.6g}, {estimate['high']:.6g}]")
    if args.svg:
        from .visualization import LoewnerVisualization

        LoewnerVisualization(verbose=args.verbose).plot_whitney_squares(
            squares, hull, save_path=args.svg)
    return 0


def cmd_analyze(args, config) -> int:
    from .harness import TheoremHarness
    from .metric_analysis import MetricAnalysis

    e = io_utils.read_chain(args.chain)
    t = e.T if args.time is None else args.time
    metric = MetricAnalysis(config, verbose=args.verbose)
    if args.suite == "distortion":
        rows = metric.distortion_suite(e, t)
    elif args.suite == "holder":
        estimate = metric.holder_exponent(e, t)
        rows = pd.DataFrame([{
            "check": "holder_exponent", "passed": not estimate.flagged,
            "margin": estimate.fit_residual,
            "params": {"beta_hat": estimate.beta_hat, "c1_hat": estimate.c1_hat,
                       "samples": estimate.sample_count}}])
    else:
        harness = TheoremHarness(config, verbose=args.verbose)
        pairs = [(0.0, t)] if e.trace is not None else None
        rows = harness.check_johnprop_conditions(e, pairs).rows
    io_utils.write_report(rows, args.out)
    failed = int((~rows["passed"].astype(bool)).sum())
    print(f"{len(rows)} checks, {failed} failed")
    return 0


def cmd_modulus(args, config) -> int:
    from .modulus import ModulusEstimator

    problem = io_utils.read_modulus_problem(args.problem, args.grid)
    result = ModulusEstimator(config, verbose=args.verbose).discrete_modulus(problem)
    io_utils.write_modulus_result(result, args.out)
    print(f"mod = {result.value:.8g} (grid {result.grid_n}, residual {result.residual:.2e})")
    if args.svg:
        from .visualization import LoewnerVisualization

        LoewnerVisualization(verbose=args.verbose).plot_modulus_density(
            result, problem.domain.hull, save_path=args.svg)
    return 0


def cmd_harness(args, config) -> int:
    from .harness import TheoremHarness

    harness = TheoremHarness(config, verbose=args.verbose, n_jobs=args.jobs)
    reports = harness.run_suite(args.suite)
    summary = harness.write_reports(reports, args.out, svg=args.svg)
    if len(summary):
        print(summary[["scenario", "suite", "passed"]].to_string(index=False))
    return 0 if all(r.passed for r in reports) else 1


COMMANDS = {
    "forward": cmd_forward,
    "zip": cmd_zip,
    "whitney": cmd_whitney,
    "analyze": cmd_analyze,
    "modulus": cmd_modulus,
    "harness": cmd_harness,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Entry point of the ``loewner`` command.

    Returns:
        int: 0 on success; for ``harness`` 0 iff every asserted check passes,
        1 otherwise; 2 on invalid input.
    """
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        return COMMANDS[args.command](args, config)
    except LoewnerLabError as err:
        print(f"loewner {args.command}: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
