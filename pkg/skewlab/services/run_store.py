"""Ledger of finished suite runs, kept in the SQL database."""

import logging
from typing import List, Optional

from sqlalchemy.orm import Session, selectinload

from skewlab.models import CaseResult, SuiteRun
from skewlab.schemas import SuiteReport
from skewlab.services.tower import config_digest

logger = logging.getLogger(__name__)


def save_report(db: Session, report: SuiteReport, config_text: str) -> SuiteRun:
    """Persist a report with all of its case records."""
    run = SuiteRun(
        suite=report.suite,
        config_digest=config_digest(config_text),
        seed=report.seed,
        passed=report.passed,
        failed=report.failed,
        skipped=report.skipped,
    )
    run.cases = [
        CaseResult(case=record.case, status=record.status, witness=record.witness,
                   note=record.note, micros=record.micros)
        for record in report.records
    ]
    db.add(run)
    db.commit()
    db.refresh(run)
    logger.info("stored run %d of suite %s", run.id, run.suite)
    return run


def list_runs(db: Session, suite: Optional[str] = None, skip: int = 0, limit: int = 100) -> List[SuiteRun]:
    query = db.query(SuiteRun).options(selectinload(SuiteRun.cases))
    if suite:
        query = query.filter(SuiteRun.suite == suite)
    return query.order_by(SuiteRun.created_at.desc(), SuiteRun.id.desc()).offset(skip).limit(limit).all()


def get_run(db: Session, run_id: int) -> Optional[SuiteRun]:
    return db.query(SuiteRun).options(selectinload(SuiteRun.cases)).filter(SuiteRun.id == run_id).first()
