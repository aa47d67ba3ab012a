from fastapi import APIRouter, Depends, HTTPException, status, Query
from sqlalchemy.orm import Session
from typing import List, Optional

from skewlab.database import get_db
from skewlab.exceptions import SkewLabError, UnknownSuiteError
from skewlab.schemas import SuiteReport, SuiteRunRequest, SuiteRunResponse
from skewlab.services import run_store
from skewlab.services.config_format import parse_config
from skewlab.services.suites import list_suites, run_suite

router = APIRouter(prefix="/api", tags=["Suites"])


@router.get("/suites", response_model=List[str])
def suite_names():
    """List the registered verification suites."""
    return list_suites()


@router.post("/suites/run", response_model=SuiteReport)
def run_verification_suite(
    request: SuiteRunRequest,
    db: Session = Depends(get_db)
):
    """Run one suite against a tower config, optionally storing the report."""
    try:
        config = parse_config(request.config)
        report = run_suite(config, request.suite, seed=request.seed, budget=request.budget)
    except UnknownSuiteError as exc:
        raise HTTPException(
            status_code=status.HTTP_404_NOT_FOUND,
            detail=str(exc)
        )
    except SkewLabError as exc:
        raise HTTPException(
            status_code=status.HTTP_400_BAD_REQUEST,
            detail=str(exc)
        )

    if request.store:
        run_store.save_report(db, report, request.config)
    return report


@router.get("/runs", response_model=List[SuiteRunResponse])
def list_stored_runs(
    suite: Optional[str] = Query(None, description="Filter by suite name"),
    skip: int = 0,
    limit: int = 100,
    db: Session = Depends(get_db)
):
    """Get stored runs, newest first."""
    return run_store.list_runs(db, suite=suite, skip=skip, limit=limit)


@router.get("/runs/{run_id}", response_model=SuiteRunResponse)
def get_stored_run(
    run_id: int,
    db: Session = Depends(get_db)
):
    """Get a stored run with its case results."""
    run = run_store.get_run(db, run_id)
    if not run:
        raise HTTPException(
            status_code=status.HTTP_404_NOT_FOUND,
            detail=f"Run with ID {run_id} not found"
        )
    return run
