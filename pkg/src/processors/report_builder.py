"""Rendering of command reports for the terminal and for machines."""

from __future__ import annotations

import logging
from typing import Any

from pydantic import ValidationError

from src.algebra.errors import HopfError
from src.models.schemas import CliRequest, Command, CommandReport, ErrorEntry, OutputMode

logger = logging.getLogger(__name__)

_SLICED = {"M", "W"}


def root_cause(exc: BaseException) -> BaseException:
    """Follow ``__cause__`` to the innermost chained exception."""
    seen = {id(exc)}
    while exc.__cause__ is not None and id(exc.__cause__) not in seen:
        exc = exc.__cause__
        seen.add(id(exc))
    return exc


def exit_code_for(exc: BaseException) -> int:
    cause = root_cause(exc)
    if isinstance(cause, HopfError):
        return cause.exit_code
    if isinstance(cause, ValidationError):
        return 2
    return 1


def _json_safe(value: Any) -> Any:
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_json_safe(item) for item in value]
    return str(value)


class ReportBuilder:
    """Turns a :class:`CommandReport` into text or JSON.

    Both modes carry the same values; text mode only lays them out for
    reading, with tensor slices printed as matrices.
    """

    def failure(self, request: CliRequest | None, exc: BaseException, command: Command | None = None) -> CommandReport:
        cause = root_cause(exc)
        if isinstance(cause, HopfError):
            entry = ErrorEntry(name=cause.name, message=str(cause), witness=_json_safe(list(cause.witness)))
        else:
            entry = ErrorEntry(name=type(cause).__name__, message=str(cause))
        return CommandReport(
            command=request.command if request else command or Command.check,
            input=request.input if request else None,
            errors=[entry],
        )

    def render(self, report: CommandReport, mode: OutputMode = OutputMode.text) -> str:
        if mode is OutputMode.json:
            return report.model_dump_json(indent=2)
        return self._text(report)

    def _text(self, report: CommandReport) -> str:
        lines = [f"command: {report.command.value}"]
        if report.input is not None:
            lines.append(f"input: {report.input}")
        for result in report.results:
            lines.append("")
            lines.append(f"[{result.get('kind', 'result')}]")
            for key, value in result.items():
                if key == "kind":
                    continue
                lines.extend(self._field(key, value))
        for warning in report.warnings:
            lines.append(f"warning: {warning}")
        for error in report.errors:
            witness = f" at {error.witness}" if error.witness else ""
            lines.append(f"error: {error.name}: {error.message}{witness}")
        return "\n".join(lines)

    @staticmethod
    def _field(key: str, value: Any) -> list[str]:
        if key in _SLICED and isinstance(value, list):
            out = []
            for index, matrix in enumerate(value):
                out.append(f"{key}_{index}:")
                out.extend("  [" + ", ".join(row) + "]" for row in matrix)
            return out
        if isinstance(value, list) and value and isinstance(value[0], list):
            return [f"{key}:"] + ["  [" + ", ".join(str(x) for x in row) + "]" for row in value]
        if isinstance(value, list):
            return [f"{key}: " + ", ".join(str(x) for x in value)]
        if isinstance(value, dict):
            return [f"{key}:"] + [f"  {inner}: {item}" for inner, item in value.items()]
        if isinstance(value, str) and "\n" in value:
            return [f"{key}:"] + [f"  {line}" for line in value.rstrip("\n").splitlines()]
        return [f"{key}: {value}"]
