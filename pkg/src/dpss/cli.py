"""Command-line entry point.

Exit codes: 0 success, 1 property or assertion failure, 2 input or usage
error, 3 step budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from dpss.ensemble import format_rational, parse_rational
from dpss.errors import FuelExhausted, ScenarioError, SimulationFault
from dpss.fuzz import run_campaign
from dpss.harness import build_trace, check_report, converge_report
from dpss.invariants import PREDICATES
from dpss.oracle import GeneratorConfig
from dpss.scenario import load_scenario, write_trace
from dpss.stepper import StepBudget, step_time

log = logging.getLogger("dpss")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_FUEL = 0, 1, 2, 3


def _rational_arg(text):
    try:
        value = parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def _fuel_arg(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("fuel must be >= 1")
    return value


def _budget(args):
    return StepBudget(args.fuel) if args.fuel else None


def _print_json(doc, out=None):
    json.dump(doc, out or sys.stdout, indent=2)
    (out or sys.stdout).write("\n")


def cmd_simulate(args) -> int:
    ens = load_scenario(args.scenario).to_ensemble()
    budget = _budget(args)
    rows = build_trace(ens, args.duration, budget, args.sample)
    if args.trace:
        with open(args.trace, "w", newline="") as fh:
            write_trace(rows, fh)
        final = step_time(args.duration, ens, budget)
        _print_json(
            {
                "command": "simulate",
                "duration": format_rational(args.duration),
                "rows": len(rows),
                "final": [
                    {"location": format_rational(u.location), "direction": int(u.direction)}
                    for u in final.uavs
                ],
            }
        )
    else:
        write_trace(rows, sys.stdout)
    return EXIT_OK


def cmd_converge(args) -> int:
    ens = load_scenario(args.scenario).to_ensemble()
    doc = converge_report(ens, _budget(args))
    _print_json(doc)
    return EXIT_OK if doc["passed"] else EXIT_FAIL


def cmd_check(args) -> int:
    ens = load_scenario(args.scenario).to_ensemble()
    selected = PREDICATES if not args.invariants else tuple(args.invariants)
    doc = check_report(ens, args.horizon, selected, _budget(args))
    _print_json(doc)
    return EXIT_OK if doc["passed"] else EXIT_FAIL


def cmd_fuzz(args) -> int:
    perimeters = tuple(parse_rational(p) for p in args.perimeters.split(","))
    cfg = GeneratorConfig(
        n_min=args.n_min,
        n_max=args.n_max,
        perimeters=perimeters,
        max_denominator=args.max_denominator,
        seed=args.seed,
    )
    summary = run_campaign(cfg, args.cases, args.workers)
    _print_json(summary)
    if summary["first_counterexample"] and args.counterexample:
        with open(args.counterexample, "w") as fh:
            _print_json(summary["first_counterexample"]["scenario"], fh)
    return EXIT_OK if summary["failing_cases"] == 0 else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dpss", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="write an event-aligned CSV trace")
    p.add_argument("--scenario", required=True)
    p.add_argument("--duration", required=True, type=_rational_arg)
    p.add_argument("--trace", help="CSV output path (default: stdout)")
    p.add_argument("--fuel", type=_fuel_arg)
    p.add_argument("--sample", type=_rational_arg, help="emit rows every R time units instead")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("converge", help="check periodicity after 2N-1 time units")
    p.add_argument("--scenario", required=True)
    p.add_argument("--fuel", type=_fuel_arg)
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("check", help="run the invariant monitors up to a horizon")
    p.add_argument("--scenario", required=True)
    p.add_argument("--horizon", required=True, type=_rational_arg)
    p.add_argument("--invariants", nargs="+", choices=PREDICATES)
    p.add_argument("--fuel", type=_fuel_arg)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("fuzz", help="seeded randomized property campaign")
    p.add_argument("--cases", type=int, required=True)
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-denominator", type=int, default=64)
    p.add_argument("--perimeters", default="1,2,7/3,10")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--counterexample", help="write the first failing scenario here")
    p.set_defaults(func=cmd_fuzz)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except ScenarioError as exc:
        log.error("invalid scenario: %s", exc)
        return EXIT_USAGE
    except (OSError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except FuelExhausted as exc:
        log.error("%s", exc)
        return EXIT_FUEL
    except SimulationFault as exc:
        log.error("simulation fault: %s", exc)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
