import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from jetframe._core.case_manager import CaseManager
from jetframe._core.errors import AnalysisError, InputError
from jetframe._core.settings.user_settings import reset_options, set_option
from jetframe._core.utils.logger import get_logger
from jetframe.cli.runner import task_for
from jetframe.cli.spec_parser import TASK_KINDS, ProblemSpec, parse_problem

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_ANALYSIS = 1
EXIT_INPUT = 2

# case option / flag -> setting
_SETTINGS = {"seed": "seed", "trials": "character_trials", "max_nodes": "max_nodes"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jetframe",
        description="Moving frames, Cartan's test and invariant counts for Lie pseudo-groups.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    for kind in TASK_KINDS:
        sub = commands.add_parser(kind, help=f"run the {kind} task of a case")
        sub.add_argument("case", help="path to a case file or name of a shipped case")
        sub.add_argument("--json", metavar="PATH", help="write the report as JSON")
        sub.add_argument("--seed", type=int, help="seed of every randomized step")
        sub.add_argument("--trials", type=int, help="direction trials of the character search")
        sub.add_argument("--max-nodes", type=int, dest="max_nodes", help="expression node budget")
        sub.add_argument("--order", type=int, help="override the task order")
        sub.add_argument("--quiet", action="store_true", help="suppress progress logging")
    return parser


def _apply_options(spec: ProblemSpec, args: argparse.Namespace) -> Optional[int]:
    """Case options, then flags, into the runtime settings; returns the order override."""
    merged: Dict[str, Any] = dict(spec.options)
    for key in ("seed", "trials", "max_nodes", "order"):
        value = getattr(args, key)
        if value is not None:
            merged[key] = value
    for key, setting_key in _SETTINGS.items():
        if key in merged:
            set_option(setting_key, int(merged[key]))
    if args.quiet:
        set_option("verbose", False)
    order = merged.get("order")
    return None if order is None else int(order)


def write_report(report: Dict[str, Any], path: str) -> None:
    Path(path).write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")


def main(argv: Optional[List[str]] = None) -> int:
    """
    Entry point of the ``jetframe`` command.

    Returns:
        int: 0 on success, 1 on an analysis failure, 2 on an input error.
    """
    args = build_parser().parse_args(argv)
    try:
        try:
            spec = parse_problem(CaseManager.load_case_text(args.case))
            order = _apply_options(spec, args)
            task = task_for(spec, args.command, order)
        except (InputError, FileNotFoundError, ValueError) as e:
            logger.error(f"error: {e}")
            return EXIT_INPUT
        try:
            report = task.run(spec)
        except AnalysisError as e:
            logger.error(f"analysis failed: {e}")
            return EXIT_ANALYSIS
        except (InputError, ValueError) as e:
            logger.error(f"error: {e}")
            return EXIT_INPUT
        sys.stdout.write(task.describe(report) + "\n")
        if args.json:
            write_report(report, args.json)
        return EXIT_OK
    finally:
        reset_options()


if __name__ == "__main__":
    sys.exit(main())
