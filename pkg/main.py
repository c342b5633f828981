# Path: main.py

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from shared.errors import LabError, UsageError
from shared.report import write_report
from verifier.config import COMMANDS, OUTPUTS, build_config
from verifier.runner import EXIT_FAIL, EXIT_USAGE, run

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad flags; route that through UsageError."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pjl", description="Deformed Jacobi weight: compute and cross-check.")
    parser.add_argument("command", choices=COMMANDS)
    # every option defaults to None so lower configuration layers show through
    parser.add_argument("--alpha")
    parser.add_argument("--beta")
    parser.add_argument("--t")
    parser.add_argument("--n", type=int)
    parser.add_argument("--n-max", dest="n_max", type=int)
    parser.add_argument("--digits", type=int)
    parser.add_argument("--tol", type=float)
    parser.add_argument("--grid", help="t_min:t_max:points")
    parser.add_argument("--case", type=int)
    parser.add_argument("--output", choices=OUTPUTS)
    parser.add_argument("--out", dest="out_path")
    parser.add_argument("--config", help="JSON file mirroring the flags")
    parser.add_argument("--db", dest="db_path", help="SQLite result store")
    parser.add_argument("--workers", type=int)
    parser.add_argument("-v", "--verbose", action="store_true", default=None)
    return parser


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING, format=LOG_FORMAT)
    logging.getLogger("verifier").setLevel(logging.DEBUG if verbose else logging.INFO)


def main(argv: Optional[List[str]] = None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        flags: Dict[str, Any] = vars(ns)
        config = build_config(flags)
    except UsageError as exc:
        print(f"usage error: {exc.reason}", file=sys.stderr)
        return EXIT_USAGE

    _configure_logging(config.verbose)
    logger = logging.getLogger("Main")
    logger.debug(f"[CONFIG] {config}")
    try:
        report, code = run(config)
        text = write_report(report, config.output, config.out_path)
    except UsageError as exc:
        print(f"usage error: {exc.reason}", file=sys.stderr)
        return EXIT_USAGE
    except LabError as exc:
        logger.error(f"[RUN_ABORTED] {exc.to_payload()}")
        return EXIT_FAIL
    if not config.out_path:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
