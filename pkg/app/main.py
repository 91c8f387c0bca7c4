"""
WaveLab command line
--------------------
    python -m app.main list
    python -m app.main validate <config.toml>
    python -m app.main run <config.toml | manifest.json> [--output DIR] [--workers N]

Exit codes: 0 ok, 1 config error, 2 numerical-validity failure, 3 acceptance failure.
"""

import argparse
import logging
import sys
from typing import Optional, Sequence

from app.core.config import settings
from app.core.logging_config import setup_logging
from app.experiments import list_experiments
from app.services.config_service import ConfigError, load_config
from app.services.experiment_service import ExitStatus, run_experiment
from app.services.output_service import write_outputs

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wavelab", description=f"{settings.PROJECT_NAME} experiment runner")
    parser.add_argument("--log-level", default=settings.LOG_LEVEL, help="Logging level (default from WAVELAB_LOG_LEVEL)")
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("list", help="List experiment ids with the statement each one checks")

    validate = commands.add_parser("validate", help="Validate a config and every sweep point without running")
    validate.add_argument("config")

    run = commands.add_parser("run", help="Run a config (TOML or manifest.json)")
    run.add_argument("config")
    run.add_argument("--output", default=None, help="Run directory (overrides [output].directory)")
    run.add_argument("--workers", type=int, default=None, help="Sweep pool size (default WAVELAB_WORKERS)")
    return parser


def print_config_error(error: ConfigError) -> None:
    print(f"config error in {error.source}:", file=sys.stderr)
    for problem in error.problems:
        print(f"  {problem}", file=sys.stderr)


def cmd_list() -> int:
    for entry in list_experiments():
        print(f"{entry['id']:<32} [{entry['reference']}]")
        print(f"{'':<32} {entry['statement']}")
        print(f"{'':<32} -> {entry['operation']}")
    return ExitStatus.OK


def cmd_validate(path: str) -> int:
    try:
        loaded = load_config(path)
    except ConfigError as e:
        print_config_error(e)
        return ExitStatus.CONFIG_ERROR
    print(f"{path}: ok ({loaded.experiment.experiment_id}, {len(loaded.points)} sweep points)")
    return ExitStatus.OK


def cmd_run(path: str, output: Optional[str], workers: Optional[int]) -> int:
    try:
        loaded = load_config(path)
    except ConfigError as e:
        print_config_error(e)
        return ExitStatus.CONFIG_ERROR

    try:
        run = run_experiment(loaded, workers=workers)
    except (ValueError, ArithmeticError) as e:
        logger.error(f"Run aborted: {type(e).__name__}: {e}")
        return ExitStatus.NUMERICAL_FAILURE

    directory = write_outputs(run, output)
    if run.status != ExitStatus.OK:
        print(f"{loaded.config.run_name}: {run.reason} (see {directory})", file=sys.stderr)
    else:
        print(f"{loaded.config.run_name}: ok ({directory})")
    return run.status


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)

    if args.command == "list":
        return int(cmd_list())
    if args.command == "validate":
        return int(cmd_validate(args.config))
    return int(cmd_run(args.config, args.output, args.workers))


if __name__ == "__main__":
    sys.exit(main())
