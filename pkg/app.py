import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from config.settings import LOG_LEVEL, THREADS
from models.reports import InvariantResult, Report
from modules.errors import DisconnectedGraphError, GraphParseError, InvariantViolation, ParameterError
from routes import covers, decomp, hierarchy, instances, oracle, spc, treecover, tsp, verify
from database.documents import dump_json, dump_model

logger = logging.getLogger(__name__)

ROUTES = [spc, hierarchy, decomp, covers, treecover, oracle, tsp, verify, instances]

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hwd",
        description="Shortest-path covers, hub hierarchies, padded decompositions, tree covers, "
        "distance oracles and Subset TSP for graphs of low highway dimension.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="debug logging")
    parser.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")
    parser.add_argument("--threads", type=int, default=THREADS, help="worker threads (default: HWD_THREADS)")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for route in ROUTES:
        route.register(subparsers)
    return parser


def configure_logging(verbose: int, quiet: bool) -> None:
    level = getattr(logging, LOG_LEVEL, logging.INFO)
    if verbose:
        level = logging.DEBUG
    elif quiet:
        level = logging.WARNING
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def emit(report: Report, out: Optional[str]) -> None:
    if out and report.document is not None:
        Path(out).write_text(dump_json(report.document) + "\n")
        logger.info("wrote %s document to %s", report.command, out)
    print(dump_model(report))


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose, args.quiet)

    try:
        report = args.handler(args)
    except InvariantViolation as e:
        logger.error("invariant violated: %s", e)
        failed = Report(command=args.command, invariants=[InvariantResult(name="runtime", ok=False, witness=e.witness)])
        print(dump_model(failed))
        return EXIT_INVARIANT
    except (GraphParseError, DisconnectedGraphError, ParameterError) as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except OSError as e:
        logger.error("cannot access %s: %s", e.filename or "file", e.strerror or e)
        return EXIT_USAGE

    emit(report, getattr(args, "out", None))
    if not report.ok:
        failed = [check.name for check in report.invariants if not check.ok]
        logger.error("%d checks failed: %s", len(failed), ", ".join(failed))
        return EXIT_INVARIANT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
