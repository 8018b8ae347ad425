"""Partial crossed product workbench - command line entry point.

    python -m src.main run example_6_3 --report out.md --machine-report out.json
    python -m src.main fuzz partial-action --count 100 --seed 7
    python -m src.main builtins

Exit codes: 0 when every check passes, 1 when a check fails or errors,
2 on input errors (bad scenario, missing file, invalid options).
"""

import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from .config import get_settings
from .schemas import FUZZ_FAMILIES, FuzzOptions, RunOptions
from .services import ReportService, fuzz_suite, list_builtins, run_scenario
from .services.errors import InputError
from .templates import get_template

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2


def configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        stream=sys.stderr,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xprod",
        description="Validate partial actions, covariant representations and crossed products at finite scale.",
    )
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR (default: XPROD_LOG_LEVEL)")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run a scenario file or builtin")
    run.add_argument("target", help="scenario file path or builtin name")
    run.add_argument("--tol", type=float, default=None, help="numerical tolerance")
    run.add_argument("--bound", type=int, default=None, help="closure bound for generated semigroups")
    run.add_argument("--mode", choices=["strict", "lax"], default=None, help="default covariant-rep mode")
    run.add_argument("--seed", type=int, default=None, help="root seed")
    run.add_argument("--jobs", type=int, default=None, help="run directives on this many threads")
    run.add_argument("--report", default=None, help="write the text report here")
    run.add_argument("--machine-report", default=None, help="write the JSON report here")

    fuzz = commands.add_parser("fuzz", help="run seeded random instances of one family")
    fuzz.add_argument("family", choices=list(FUZZ_FAMILIES))
    fuzz.add_argument("--count", type=int, default=100)
    fuzz.add_argument("--seed", type=int, default=0)
    fuzz.add_argument("--tol", type=float, default=None)
    fuzz.add_argument("--report", default=None)
    fuzz.add_argument("--machine-report", default=None)

    commands.add_parser("builtins", help="list bundled scenarios")
    return parser


def _print_report(report) -> None:
    print(ReportService().export(report, "text", options={"show_timing": False}).content)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level or get_settings().log_level)

    if args.command == "builtins":
        for name in list_builtins():
            print(get_template(name).summary())
        return EXIT_OK

    try:
        if args.command == "run":
            options = RunOptions(
                target=args.target,
                tol=args.tol,
                bound=args.bound,
                mode=args.mode,
                seed=args.seed,
                jobs=args.jobs,
                report=args.report,
                machine_report=args.machine_report,
            )
            report = run_scenario(options)
        else:
            options = FuzzOptions(
                family=args.family,
                count=args.count,
                seed=args.seed,
                tol=args.tol,
                report=args.report,
                machine_report=args.machine_report,
            )
            report = fuzz_suite(options)
    except InputError as exc:
        logger.error(f"{exc.kind}: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValidationError as exc:
        message = "; ".join(f"{'.'.join(map(str, e['loc']))}: {e['msg']}" for e in exc.errors())
        print(f"error: {message}", file=sys.stderr)
        return EXIT_INPUT

    _print_report(report)
    return EXIT_OK if report.exit_code == 0 else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
