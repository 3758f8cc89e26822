"""Command-line entrypoint: ``python -m src.cli <command> [input] [flags]``."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Sequence

from pydantic import ValidationError

from src.models.schemas import CliRequest, Command, Member, Method, OutputMode, Side
from src.processors.report_builder import ReportBuilder, exit_code_for
from src.utils.logging import configure_logging
from src.workflow.orchestrator import WorkflowExecutionError, WorkflowOrchestrator

logger = logging.getLogger(__name__)


def _parse_args(argv: Sequence[str] | None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(prog="hopf", description="Exact integrals on finite-dimensional Hopf algebras.")
    parser.add_argument("command", choices=[command.value for command in Command])
    parser.add_argument("input", nargs="?", help="a .hopf file or builtin:<name>")
    parser.add_argument("--n", type=int, help="family parameter for cyclic-group and q-plane")
    parser.add_argument("--side", choices=[side.value for side in Side], default=Side.right.value)
    parser.add_argument("--member", choices=[member.value for member in Member], default=Member.A.value)
    parser.add_argument("--elem", dest="element", help="element expression in the target algebra")
    parser.add_argument("--method", choices=[method.value for method in Method], default=Method.vacuum.value)
    parser.add_argument("--output", choices=[mode.value for mode in OutputMode], default=OutputMode.text.value)
    parser.add_argument("--json", dest="output", action="store_const", const=OutputMode.json.value)
    parser.add_argument("--q-eval", dest="q_eval", help="rational point at which to evaluate every scalar")
    return parser.parse_args(argv)


def run(request: CliRequest, builder: ReportBuilder | None = None) -> tuple[int, str]:
    """Execute one request; returns the exit code and the rendered report."""
    builder = builder or ReportBuilder()
    try:
        report = WorkflowOrchestrator().execute(request)
    except WorkflowExecutionError as exc:
        return exit_code_for(exc), builder.render(builder.failure(request, exc), request.output)
    return 0, builder.render(report, request.output)


def main(argv: Sequence[str] | None = None) -> int:
    configure_logging()
    try:
        args = _parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    builder = ReportBuilder()
    try:
        request = CliRequest(**vars(args))
    except ValidationError as exc:
        mode = OutputMode(args.output)
        print(builder.render(builder.failure(None, exc, Command(args.command)), mode))
        return 2
    code, rendered = run(request, builder)
    print(rendered)
    return code


if __name__ == "__main__":
    sys.exit(main())
