"""Tests for the background run API."""

import unittest
from unittest.mock import patch
from uuid import UUID, uuid4

from fastapi import HTTPException

import api.main as app_main
from src.algebra.errors import UnknownBuiltin
from src.models.schemas import CliRequest, CommandReport, JobStatus
from src.workflow.orchestrator import WorkflowExecutionError


def _sample_request(**fields) -> CliRequest:
    return CliRequest.model_validate({"command": "integrate", "input": "builtin:dqs", "element": "a*b", **fields})


class RunApiTests(unittest.TestCase):
    def setUp(self) -> None:
        app_main.clear_jobs_for_testing()

    @patch("api.main._submit_pipeline")
    def test_create_run_enqueues_pipeline_and_returns_pending(self, submit_pipeline) -> None:
        response = app_main.create_run(_sample_request())
        job_id = UUID(response["job_id"])

        self.assertEqual(response["status"], "pending")
        submit_pipeline.assert_called_once_with(job_id)
        self.assertEqual(app_main.get_status(job_id)["status"], "pending")

    @patch("api.main._submit_pipeline")
    def test_result_is_conflict_until_completed(self, submit_pipeline) -> None:
        job_id = UUID(app_main.create_run(_sample_request())["job_id"])
        with self.assertRaises(HTTPException) as ctx:
            app_main.get_result(job_id)
        self.assertEqual(ctx.exception.status_code, 409)

    def test_unknown_job_is_not_found(self) -> None:
        for endpoint in (app_main.get_status, app_main.get_result):
            with self.subTest(endpoint=endpoint.__name__):
                with self.assertRaises(HTTPException) as ctx:
                    endpoint(uuid4())
                self.assertEqual(ctx.exception.status_code, 404)

    @patch("api.main._submit_pipeline")
    def test_pipeline_completes_a_run(self, submit_pipeline) -> None:
        job_id = UUID(app_main.create_run(_sample_request())["job_id"])
        app_main._run_pipeline(job_id)

        self.assertEqual(app_main.get_status(job_id)["status"], JobStatus.completed)
        report = app_main.get_result(job_id)
        self.assertIsInstance(report, CommandReport)
        self.assertEqual(report.results[0]["value"], "1")

    @patch("api.main._submit_pipeline")
    def test_pipeline_marks_job_failed_on_workflow_error(self, submit_pipeline) -> None:
        job_id = UUID(app_main.create_run(_sample_request())["job_id"])

        with patch("api.main._orchestrator") as mock_orch:
            failure = WorkflowExecutionError("integrate failed")
            failure.__cause__ = UnknownBuiltin("unknown builtin 'nope'", witness=("nope",))
            mock_orch.execute.side_effect = failure
            app_main._run_pipeline(job_id)

        status = app_main.get_status(job_id)
        self.assertEqual(status["status"], JobStatus.failed)
        self.assertIn("UnknownBuiltin: unknown builtin 'nope'", status["error"])

    def test_list_builtins(self) -> None:
        response = app_main.list_builtins()
        self.assertIn("dqs", response["builtins"])
        self.assertEqual(response["parameters"]["q-plane"], {"name": "n", "default": 2})


if __name__ == "__main__":
    unittest.main()
