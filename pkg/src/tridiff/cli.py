"""Command-line entry point: ``tridiff simulate | validate | oracle-check``."""

from __future__ import annotations

import argparse
import sys

from .errors import TridiffError
from .network import run_equivalence_suite
from .scenario import (
    ScenarioParseError,
    ScenarioValidationError,
    SimulationError,
    emit_reports,
    load_scenario,
    run,
)
from .traversal import DRIVE_MODES

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PARSE = 3
EXIT_VALIDATION = 4
EXIT_SIMULATION = 5
EXIT_IO = 6

ORACLE_TOL = 1e-9


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tridiff",
        description="Three-output differential in-pipe robot simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a scenario and write reports")
    sim.add_argument("scenario")
    sim.add_argument("--out", required=True, help="output directory")
    sim.add_argument("--plots", action="store_true", help="also write SVG speed profiles")
    sim.add_argument("--drive", choices=DRIVE_MODES, help="override the scenario drive mode")
    sim.add_argument("--degrees", action="store_true", help="read angles in the file as degrees")

    val = sub.add_parser("validate", help="parse and validate a scenario")
    val.add_argument("scenario")
    val.add_argument("--degrees", action="store_true")

    ora = sub.add_parser("oracle-check", help="closed form vs gear-network equivalence suite")
    ora.add_argument("--cases", type=int, default=1000)
    ora.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "oracle-check":
            deviations = run_equivalence_suite(args.cases, args.seed)
            worst = max(deviations) if deviations else 0.0
            bad = sum(d >= ORACLE_TOL for d in deviations)
            print(f"{len(deviations)} cases, max deviation {worst:.3e} rad/s, "
                  f"{bad} above {ORACLE_TOL:g}")
            return EXIT_OK if bad == 0 else EXIT_CHECK_FAILED

        scenario = load_scenario(args.scenario, degrees=args.degrees)
        if args.command == "validate":
            print(f"{args.scenario}: ok ({len(scenario.network.segments)} segments, "
                  f"{len(scenario.plans)} plans)")
            return EXIT_OK

        artifacts = run(scenario, drive=args.drive)
        files = emit_reports(artifacts, args.out, plots=args.plots or scenario.plots)
        for path in files:
            print(path)
        return EXIT_OK
    except ScenarioParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ScenarioValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (SimulationError, TridiffError) as exc:
        print(f"simulation error: {exc}", file=sys.stderr)
        return EXIT_SIMULATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
