import argparse
import os
import sys
from datetime import datetime

from uur.acceptance import check_acceptance
from uur.errors import ScenarioError, UncertaintyError
from uur.logger import get_logger, setup_logger
from uur.scenarios import ThetaGrid, catalog, get_scenario
from uur.sweep import default_output_path, run_scenario, write_curves
from utils.config import config

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_ACCEPTANCE_FAILED = 1
EXIT_USAGE = 2


def build_parser():
    parser = argparse.ArgumentParser(
        prog="uur",
        description="Variance-product lower bounds for unitary operators: curve sweeps and acceptance checks.",
    )
    parser.add_argument("--seed", type=int, default=None, help="seed for randomized suites (default: UUR_SEED)")
    parser.add_argument("--config", default=None, help="YAML scenario file (default: UUR_SCENARIO_FILE)")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="sweep one scenario over its theta grid")
    run.add_argument("scenario", help="scenario name, see `list`")
    run.add_argument("--grid", default=None, help="start:stop:count, e.g. 0:2pi:721")
    run.add_argument("--out", default=None, help="output file, '-' for stdout (default: UUR_OUTPUT_DIR/<name>.<fmt>)")
    run.add_argument("--format", choices=("csv", "json"), default="csv")

    sub.add_parser("list", help="print the scenario catalog")

    check = sub.add_parser("check", help="run the acceptance suite")
    check.add_argument("--report", default=None, help="JSON report path (default: UUR_REPORT_DIR/acceptance.json)")
    return parser


def cmd_run(args):
    scenario = get_scenario(args.scenario, args.config)
    if args.grid:
        scenario = scenario.with_grid(ThetaGrid.parse(args.grid))
    points = run_scenario(scenario, seed=args.seed)
    out = args.out or default_output_path(scenario.name, args.format)
    write_curves(points, out, args.format, bound_ids=scenario.bounds_requested)
    return EXIT_OK


def cmd_list(args):
    for name, scenario in catalog(args.config).items():
        ops = ",".join(op.name for op in scenario.operators)
        print(f"{name:<18} ops={ops:<8} bounds={' '.join(scenario.bounds_requested)}  {scenario.description}")
    return EXIT_OK


def cmd_check(args):
    report = args.report or os.path.join(config.REPORT_DIR, "acceptance.json")
    exit_code, _ = check_acceptance(seed=args.seed, report_path=report)
    return EXIT_ACCEPTANCE_FAILED if exit_code else EXIT_OK


COMMANDS = {"run": cmd_run, "list": cmd_list, "check": cmd_check}


def main(argv=None):
    args = build_parser().parse_args(argv)
    setup_logger()

    start_time = datetime.now()
    details = {"command": args.command, "start_time": start_time.strftime("%Y-%m-%d %H:%M:%S")}
    logger.info(f"uur {args.command} | PID {os.getpid()}")

    try:
        config.validate()
        if args.seed is not None and not 0 <= args.seed < 2**64:
            raise ValueError(f"--seed must be a 64-bit unsigned integer, got {args.seed}")
        if args.config and not os.path.exists(args.config):
            raise ScenarioError("config", f"file not found: {args.config}")
        exit_code = COMMANDS[args.command](args)
    except ScenarioError as e:
        logger.error(f"Scenario error in {e.field}: {e.message}")
        return EXIT_USAGE
    except UncertaintyError as e:
        logger.error(f"Invalid input: {str(e)}")
        return EXIT_USAGE
    except ValueError as e:
        logger.error(f"Configuration error: {str(e)}")
        return EXIT_USAGE

    details["duration"] = str(datetime.now() - start_time).split(".")[0]
    logger.info(f"Finished {details['command']} | exit {exit_code} | Duration: {details['duration']}")
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
