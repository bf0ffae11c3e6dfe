"""Command-line front end: ``mixrisk solve``, ``mixrisk verify`` and ``mixrisk validate``."""

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple

from mixrisk import __version__
from mixrisk.errors import MixRiskError
from mixrisk.report import render_scaling_study, render_threshold, run_report
from mixrisk.scenario_file import ReportKind, ScenarioFile, parse_scenario_file
from mixrisk.utility import validate_utility
from mixrisk.verification import (
    DEFAULT_EPSILONS,
    cara_crra_threshold_report,
    epsilon_scaling_study,
    threshold_parameters,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_IO = 1


def _epsilons(text: str) -> Tuple[float, ...]:
    try:
        return tuple(float(item) for item in text.split(",") if item.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mixrisk",
        description="Optimal saving and precautionary indicators under mixed fuzzy/random risk.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG on stderr"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", help="solve scenario files and report the indicators")
    solve.add_argument("files", nargs="+", help="scenario documents (JSON)")
    solve.add_argument(
        "--outputs",
        choices=[kind.value for kind in ReportKind],
        action="append",
        help="report kind; repeat for several (default: the document's outputs)",
    )
    solve.add_argument("--csv-path", default=None, help="write the CSV here instead of stdout")
    solve.add_argument("--jobs", type=int, default=1, help="scenario files solved concurrently")

    verify = commands.add_parser("verify", help="Taylor convergence study for one scenario")
    verify.add_argument("file")
    verify.add_argument(
        "--epsilons",
        type=_epsilons,
        default=DEFAULT_EPSILONS,
        help="decreasing risk scales, e.g. 0.1,0.05,0.025",
    )

    validate = commands.add_parser("validate", help="parse a scenario and check its utilities")
    validate.add_argument("file")
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )


def _load(path: str) -> ScenarioFile:
    with open(path, encoding="utf-8") as stream:
        return parse_scenario_file(stream.read())


def _failure(path: str, stage: str, exc: MixRiskError) -> Tuple[str, int]:
    return f"{path}: error [{exc.category}] {stage}: {exc}\n", exc.exit_code


def _solve_one(
    path: str, reports: Optional[Sequence[ReportKind]], csv_path: Optional[str]
) -> Tuple[str, int]:
    try:
        scenario_file = _load(path)
    except OSError as exc:
        return f"{path}: error [io] read: {exc}\n", EXIT_IO
    except MixRiskError as exc:
        return _failure(path, "parse", exc)
    text, code = run_report(scenario_file, reports, csv_path)
    if code != EXIT_OK:
        return f"{path}: {text}", code
    return text, code


def _solve(args: argparse.Namespace) -> int:
    reports = [ReportKind(kind) for kind in args.outputs] if args.outputs else None
    if args.csv_path and len(args.files) > 1:
        logger.error("--csv-path needs a single scenario file, got %d", len(args.files))
        return 2
    if args.jobs < 1:
        logger.error("--jobs must be at least 1, got %d", args.jobs)
        return 2

    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        results = list(pool.map(lambda path: _solve_one(path, reports, args.csv_path), args.files))

    exit_code = EXIT_OK
    for text, code in results:
        stream = sys.stdout if code == EXIT_OK else sys.stderr
        stream.write(text)
        if exit_code == EXIT_OK:
            exit_code = code
    return exit_code


def _verify(args: argparse.Namespace) -> int:
    stage = "parse"
    try:
        scenario_file = _load(args.file)
        stage = "verify"
        scenario = scenario_file.scenario
        study = epsilon_scaling_study(scenario, args.epsilons)
        sys.stdout.write(render_scaling_study(study))
        for kind in study.kinds():
            if not study.monotone(kind):
                logger.warning("%s: Taylor error is not monotone in the risk scale", kind.value)
        parameters = threshold_parameters(scenario)
        if parameters is not None:
            stage = "threshold"
            threshold = cara_crra_threshold_report(**parameters, template=scenario)
            sys.stdout.write(render_threshold(threshold))
    except OSError as exc:
        sys.stderr.write(f"{args.file}: error [io] {stage}: {exc}\n")
        return EXIT_IO
    except MixRiskError as exc:
        text, code = _failure(args.file, stage, exc)
        sys.stderr.write(text)
        return code
    return EXIT_OK


def _validate(args: argparse.Namespace) -> int:
    stage = "parse"
    try:
        scenario_file = _load(args.file)
        scenario = scenario_file.scenario
        for name, utility in (("u", scenario.u), ("v", scenario.v)):
            report = validate_utility(utility)
            status = "ok" if report.passed else "fails " + ", ".join(report.failures())
            sys.stdout.write(f"{name} ({utility.family}): {status}\n")
        stage = "validate"
        scenario.check_assumptions()
    except OSError as exc:
        sys.stderr.write(f"{args.file}: error [io] {stage}: {exc}\n")
        return EXIT_IO
    except MixRiskError as exc:
        text, code = _failure(args.file, stage, exc)
        sys.stderr.write(text)
        return code
    sys.stdout.write(f"{args.file}: valid {scenario.model.value} scenario\n")
    return EXIT_OK


_COMMANDS = {"solve": _solve, "verify": _verify, "validate": _validate}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run the command line.

    Args:
        argv: Arguments without the program name (default: ``sys.argv[1:]``)

    Returns:
        0 on success, 2 for parse errors, 3 for solver errors, 4 for numerical errors
    """
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    return _COMMANDS[args.command](args)
