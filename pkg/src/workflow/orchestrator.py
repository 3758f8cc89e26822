"""Runs a request through the command graph and packages the report."""

from __future__ import annotations

import logging

from src.algebra.errors import HopfError
from src.models.schemas import CliRequest, CommandReport
from src.workflow.graph import command_graph

logger = logging.getLogger(__name__)


class WorkflowExecutionError(RuntimeError):
    """Raised when the command workflow fails; the original error is the cause."""


class WorkflowOrchestrator:
    """Coordinates loading, compilation and command dispatch via LangGraph."""

    def execute(self, request: CliRequest) -> CommandReport:
        initial_state = {
            "request": request,
            "ast": None,
            "compiled": None,
            "results": [],
            "warnings": [],
        }
        try:
            final_state = command_graph.invoke(initial_state)
        except HopfError as exc:
            logger.error("Command %s failed: %s: %s", request.command.value, exc.name, exc)
            raise WorkflowExecutionError(f"{request.command.value} failed: {exc}") from exc
        except Exception as exc:
            logger.exception("Command workflow execution failed")
            raise WorkflowExecutionError(f"{request.command.value} failed to execute") from exc
        return CommandReport(
            command=request.command,
            input=request.input,
            results=final_state["results"],
            warnings=final_state["warnings"],
        )
