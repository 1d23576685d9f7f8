"""Command line interface: evaluate track files, verify the analytic tables,
and simulate seeded scenarios.

Exit status is 0 on success, 1 with a one-line diagnostic on any parse or
validation failure, and 1 from ``tables`` when any cell deviates from its
formula beyond the tolerance.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from .core import DimensionMismatchError, ParameterError, UnsupportedOrderError, validate_params
from .metrics import METRIC_NAMES, eval_series
from .scenarios import (
    DELTA_FRACTIONS,
    FIGURE_IDS,
    ScenarioError,
    SimConfig,
    simulate_tracks,
    table_report,
)
from .trackio import TrackFormatError, read_tracks, write_results, write_tracks

_TABLE_TOLERANCE = 1e-9


def _parse_order(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'inf', got {text!r}") from None


def _parse_metrics(text: str) -> list[str]:
    names = [token.strip() for token in text.split(",") if token.strip()]
    unknown = [name for name in names if name not in METRIC_NAMES]
    if unknown:
        raise argparse.ArgumentTypeError(
            f"unknown metrics {unknown}; choose from {', '.join(METRIC_NAMES)}")
    if not names:
        raise argparse.ArgumentTypeError("at least one metric is required")
    return names


def _add_metric_flags(parser: argparse.ArgumentParser, tables_mode: bool = False) -> None:
    default_c = 1.0 if tables_mode else 80.0
    parser.add_argument("--p", type=_parse_order, default=1.0,
                        help="metric order, a number >= 1 or 'inf' (default 1)")
    parser.add_argument("--pnorm", type=_parse_order, default=2.0,
                        help="vector norm order for base distances (default 2)")
    parser.add_argument("--c", type=float, default=default_c,
                        help=f"cut-off distance (default {default_c:g})")
    parser.add_argument("--cdot", type=float, default=None,
                        help="cardinality penalty >= c (default: c+1, or 1.2c for tables)")
    parser.add_argument("--xi", type=float, default=1.0,
                        help="empty-set weight in [0, 1] (default 1)")
    parser.add_argument("--alpha", type=float, default=2.0,
                        help="cardinality scale in (0, 2] (default 2)")
    parser.add_argument("--metrics", type=_parse_metrics, default=list(METRIC_NAMES),
                        help="comma-separated subset of ospa,gospa,cospa (default all)")


def _params_from(args: argparse.Namespace, tables_mode: bool = False):
    cdot = args.cdot
    if cdot is None:
        cdot = 1.2 * args.c if tables_mode else args.c + 1.0
    return validate_params(p=args.p, base_norm=args.pnorm, c=args.c,
                           c_dot=cdot, xi=args.xi, alpha=args.alpha)


def _guess_format(path: str) -> str:
    return "json" if str(path).lower().endswith(".json") else "csv"


def _write_output(steps, out: str, format: str) -> None:
    if out == "-":
        write_results(steps, sys.stdout, format=format)
    else:
        write_results(steps, out, format=format)


def _maybe_plot(steps, out: str, plot: bool) -> None:
    if not plot:
        return
    if out == "-":
        raise ValueError("--plot needs --out pointing at a file, not stdout")
    from .report import render_report

    base = Path(out)
    base = base.parent / base.stem
    for path in render_report(steps, base):
        print(f"wrote {path}", file=sys.stderr)


def cmd_eval(args: argparse.Namespace) -> int:
    params = _params_from(args)
    truth = read_tracks(args.truth, format=_guess_format(args.truth))
    estimate = read_tracks(args.est, format=_guess_format(args.est))
    steps = eval_series(truth.point_sets(), estimate.point_sets(), params, args.metrics)
    _write_output(steps, args.out, args.format)
    _maybe_plot(steps, args.out, args.plot)
    return 0


def cmd_tables(args: argparse.Namespace) -> int:
    if args.p != 1:
        raise UnsupportedOrderError("the analytic tables are defined at order 1; drop --p")
    params = _params_from(args, tables_mode=True)
    figures = (args.figure,) if args.figure is not None else None
    cells, verdicts = table_report(params, figures, DELTA_FRACTIONS)
    cell_failures = 0
    for cell in cells:
        ok = cell.passed(_TABLE_TOLERANCE)
        cell_failures += 0 if ok else 1
        print(f"fig {cell.figure}  {cell.case:<24s} {cell.candidate:<4s} {cell.metric:<5s} "
              f"computed={cell.computed:.12g}  expected={cell.expected:.12g}  "
              f"{'PASS' if ok else 'FAIL'}")
    verdict_failures = 0
    for row in verdicts:
        ok = row.passed()
        verdict_failures += 0 if ok else 1
        print(f"fig {row.figure}  {row.case:<24s} closest by {row.metric:<5s} "
              f"computed={'='.join(row.computed)}  expected={'='.join(row.expected)}  "
              f"{'PASS' if ok else 'FAIL'}")
    total = len(cells) + len(verdicts)
    failures = cell_failures + verdict_failures
    print(f"{total - failures} of {total} checks pass "
          f"({len(cells)} cells, {len(verdicts)} verdicts)")
    return 0 if failures == 0 else 1


def cmd_simulate(args: argparse.Namespace) -> int:
    config = SimConfig(
        num_targets=args.targets,
        num_steps=args.steps,
        survival_prob=args.survival,
        detection_prob=args.detection,
        clutter_rate=args.clutter,
        noise_std=args.noise,
        seed=args.seed,
    )
    truth, estimate = simulate_tracks(config)
    write_tracks(truth, args.truth, format=_guess_format(args.truth))
    write_tracks(estimate, args.est, format=_guess_format(args.est))
    if args.eval:
        params = _params_from(args)
        steps = eval_series(truth, estimate, params, args.metrics)
        _write_output(steps, args.out, args.format)
        _maybe_plot(steps, args.out, args.plot)
    elif args.plot:
        raise ValueError("--plot requires --eval")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cospa",
        description="Set distances (OSPA, GOSPA, COSPA) between truth and estimated tracks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate an estimate track file against a truth file")
    _add_metric_flags(p_eval)
    p_eval.add_argument("--truth", required=True, help="truth track file (csv, or json by extension)")
    p_eval.add_argument("--est", required=True, help="estimate track file")
    p_eval.add_argument("--out", default="-", help="results path, '-' for stdout (default)")
    p_eval.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="results format (default csv)")
    p_eval.add_argument("--plot", action="store_true",
                        help="also render PNG figures next to --out")
    p_eval.set_defaults(handler=cmd_eval)

    p_tables = sub.add_parser("tables", help="verify the analytic figure tables cell by cell")
    _add_metric_flags(p_tables, tables_mode=True)
    p_tables.add_argument("--figure", type=int, choices=FIGURE_IDS, default=None,
                          help="restrict to one figure (default: all)")
    p_tables.set_defaults(handler=cmd_tables)

    p_sim = sub.add_parser("simulate", help="generate a seeded scenario, optionally evaluating it")
    _add_metric_flags(p_sim)
    p_sim.add_argument("--targets", type=int, default=10, help="initial target count (default 10)")
    p_sim.add_argument("--steps", type=int, default=50, help="number of steps (default 50)")
    p_sim.add_argument("--survival", type=float, default=0.99,
                       help="per-step survival probability (default 0.99)")
    p_sim.add_argument("--detection", type=float, default=0.8,
                       help="detection probability (default 0.8)")
    p_sim.add_argument("--clutter", type=float, default=2.0,
                       help="mean clutter points per step (default 2)")
    p_sim.add_argument("--noise", type=float, default=1.0,
                       help="measurement noise standard deviation (default 1)")
    p_sim.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    p_sim.add_argument("--truth", required=True, help="output path for the truth tracks")
    p_sim.add_argument("--est", required=True, help="output path for the estimated tracks")
    p_sim.add_argument("--eval", action="store_true",
                       help="also evaluate the pair and write results to --out")
    p_sim.add_argument("--out", default="-", help="results path for --eval, '-' for stdout")
    p_sim.add_argument("--format", choices=("csv", "json"), default="csv",
                       help="results format (default csv)")
    p_sim.add_argument("--plot", action="store_true",
                       help="with --eval, render PNG figures next to --out")
    p_sim.set_defaults(handler=cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ParameterError, TrackFormatError, ScenarioError, UnsupportedOrderError,
            DimensionMismatchError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
