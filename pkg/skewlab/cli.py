"""Batch command line: build a tower from a config, evaluate or run suites.

    python -m skewlab --config tower.cfg --suite ring-axioms --report jsonl
    python -m skewlab --config plane.cfg --eval "y*x"

Exit status is 0 when every case passes, 1 when any case fails and 2 for
configuration errors, invalid skew data or unknown suites.
"""

import argparse
import logging
import sys
from typing import List, Optional, TextIO

from skewlab.config import get_settings
from skewlab.exceptions import (
    ConfigError,
    ExpressionError,
    NotInvertibleError,
    RelationError,
    SkewDataError,
    SkewLabError,
    UnknownSuiteError,
)
from skewlab.models import CaseStatus, ReportFormat
from skewlab.schemas import SuiteReport
from skewlab.services.config_format import parse_config
from skewlab.services.suites import list_suites, run_suites
from skewlab.services.tower import eval_expression

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_CONFIG = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="skewlab", description=__doc__.split("\n\n")[0])
    parser.add_argument("--config", metavar="PATH", help="ring tower configuration file")
    parser.add_argument("--suite", metavar="NAME", action="append",
                        help="suite to run (repeatable); defaults to the [suite] section, else all")
    parser.add_argument("--eval", metavar="EXPR", dest="expression",
                        help="evaluate EXPR in the top ring; series results always end in "
                             "\" + O(j^N)\", so (1+y)^0 prints 1 + O(j^N)")
    parser.add_argument("--report", choices=[fmt.value for fmt in ReportFormat], default=ReportFormat.TEXT.value)
    parser.add_argument("--seed", type=int, help="seed for sampled cases")
    parser.add_argument("--budget", type=int, help="enumeration budget in elements")
    parser.add_argument("--store", action="store_true", help="write the reports to the run ledger")
    parser.add_argument("--list-suites", action="store_true", help="print the suite names and exit")
    return parser


def write_report(report: SuiteReport, fmt: ReportFormat, out: TextIO) -> None:
    for record in report.records:
        if fmt == ReportFormat.JSONL:
            out.write(record.model_dump_json(exclude_none=True) + "\n")
            continue
        line = f"{record.suite}  {record.case}  {record.status.value}  {record.micros}us"
        if record.witness:
            line += f"  witness: {record.witness}"
        if record.note:
            line += f"  ({record.note})"
        out.write(line + "\n")
    if fmt == ReportFormat.TEXT:
        out.write(f"{report.suite}: {report.passed} passed, {report.failed} failed, {report.skipped} skipped\n")


def _store(reports: List[SuiteReport], config_text: str) -> None:
    from skewlab.database import SessionLocal, init_db
    from skewlab.services.run_store import save_report

    init_db()
    db = SessionLocal()
    try:
        for report in reports:
            save_report(db, report, config_text)
    finally:
        db.close()


def main(argv: Optional[List[str]] = None, out: TextIO = None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    settings = get_settings()
    logging.basicConfig(level=settings.log_level.upper(), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")

    if args.list_suites:
        out.write("\n".join(list_suites()) + "\n")
        return EXIT_OK
    if not args.config:
        sys.stderr.write("skewlab: --config is required\n")
        return EXIT_CONFIG

    try:
        with open(args.config, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        sys.stderr.write(f"skewlab: cannot read {args.config}: {exc}\n")
        return EXIT_CONFIG

    try:
        config = parse_config(text)
        if args.expression is not None:
            out.write(eval_expression(config, args.expression) + "\n")
            return EXIT_OK
        reports = run_suites(config, args.suite, seed=args.seed, budget=args.budget)
    except (ConfigError, SkewDataError, RelationError, UnknownSuiteError) as exc:
        sys.stderr.write(f"skewlab: {exc}\n")
        return EXIT_CONFIG
    except (ExpressionError, NotInvertibleError) as exc:
        sys.stderr.write(f"skewlab: {exc}\n")
        return EXIT_FAILURES
    except SkewLabError as exc:
        logger.error("run aborted: %s", exc)
        return EXIT_FAILURES

    fmt = ReportFormat(args.report)
    for report in reports:
        write_report(report, fmt, out)
    if args.store:
        _store(reports, text)
    failed = any(record.status == CaseStatus.FAIL for report in reports for record in report.records)
    return EXIT_FAILURES if failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
