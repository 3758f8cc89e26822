"""FastAPI entrypoint for the Hopf vacuum integrals job service."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from threading import RLock
from uuid import UUID

from fastapi import FastAPI, HTTPException

from src.config.settings import settings
from src.models.schemas import CliRequest, CommandReport, JobRecord, JobStatus
from src.presentation.builtins import BUILTIN_NAMES, FAMILY_PARAMS
from src.processors.report_builder import ReportBuilder, root_cause
from src.utils.logging import configure_logging
from src.workflow.orchestrator import WorkflowExecutionError, WorkflowOrchestrator

UTC = timezone.utc

configure_logging()
logger = logging.getLogger(__name__)

app = FastAPI(title=settings.app_name, version=settings.app_version)

_orchestrator = WorkflowOrchestrator()
_builder = ReportBuilder()
_jobs: dict[UUID, JobRecord] = {}
_jobs_lock = RLock()
_executor = ThreadPoolExecutor(max_workers=settings.job_workers)


def _mark_job_failed(job_id: UUID, error: str, report: CommandReport | None = None) -> None:
    """Update the job record to failed status with the provided error message."""
    with _jobs_lock:
        current = _jobs.get(job_id)
        if not current:
            return
        current.status = JobStatus.failed
        current.error = error
        current.result = report
        current.updated_at = datetime.now(UTC)


def _run_pipeline(job_id: UUID) -> None:
    with _jobs_lock:
        job = _jobs.get(job_id)
        if not job:
            return
        job.status = JobStatus.running
        job.updated_at = datetime.now(UTC)
        request = job.request

    try:
        report = _orchestrator.execute(request)
        with _jobs_lock:
            current = _jobs.get(job_id)
            if not current:
                return
            current.result = report
            current.status = JobStatus.completed
            current.updated_at = datetime.now(UTC)
    except WorkflowExecutionError as exc:
        cause = root_cause(exc)
        logger.error("Run %s failed: %s", job_id, cause)
        _mark_job_failed(job_id, f"{type(cause).__name__}: {cause}", _builder.failure(request, exc))
    except Exception as exc:  # pragma: no cover - unexpected failure branch
        logger.exception("Run %s failed unexpectedly", job_id)
        _mark_job_failed(job_id, f"Unexpected failure: {exc}")


def _submit_pipeline(job_id: UUID) -> None:
    try:
        _executor.submit(_run_pipeline, job_id)
    except RuntimeError as exc:
        logger.exception("Failed to enqueue run")
        _mark_job_failed(job_id, f"Failed to enqueue job: {exc}")


@app.post("/api/runs", response_model=dict)
def create_run(request: CliRequest) -> dict:
    job = JobRecord(request=request)
    with _jobs_lock:
        _jobs[job.job_id] = job
    _submit_pipeline(job.job_id)
    return {"job_id": str(job.job_id), "status": JobStatus.pending}


@app.get("/api/runs/{job_id}/status", response_model=dict)
def get_status(job_id: UUID) -> dict:
    with _jobs_lock:
        job = _jobs.get(job_id)
    if not job:
        raise HTTPException(status_code=404, detail="Job not found")
    return {"job_id": str(job_id), "status": job.status, "error": job.error}


@app.get("/api/runs/{job_id}/result", response_model=CommandReport)
def get_result(job_id: UUID) -> CommandReport:
    with _jobs_lock:
        job = _jobs.get(job_id)
    if not job:
        raise HTTPException(status_code=404, detail="Job not found")
    if job.status != JobStatus.completed or not job.result:
        raise HTTPException(status_code=409, detail="Job not completed")
    return job.result


@app.get("/api/builtins", response_model=dict)
def list_builtins() -> dict:
    return {
        "builtins": list(BUILTIN_NAMES),
        "parameters": {name: {"name": key, "default": default} for name, (key, default) in FAMILY_PARAMS.items()},
    }


@app.on_event("shutdown")
def shutdown_executor() -> None:
    _executor.shutdown(wait=True)


def clear_jobs_for_testing() -> None:
    """Test utility to clear in-memory jobs safely."""
    with _jobs_lock:
        _jobs.clear()
