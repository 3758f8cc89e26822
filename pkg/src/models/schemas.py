"""Pydantic models for request/response contracts."""

from __future__ import annotations

from datetime import datetime, timezone
from enum import Enum
from fractions import Fraction
from typing import Any
from uuid import UUID, uuid4

from pydantic import BaseModel, Field, field_validator


class JobStatus(str, Enum):
    pending = "pending"
    running = "running"
    completed = "completed"
    failed = "failed"


class Command(str, Enum):
    check = "check"
    dual = "dual"
    tensors = "tensors"
    smash = "smash"
    projectors = "projectors"
    integrate = "integrate"
    delta = "delta"
    builtin = "builtin"
    identities = "identities"


class Member(str, Enum):
    A = "A"
    H = "H"


class Side(str, Enum):
    right = "right"
    left = "left"


class Method(str, Enum):
    trace = "trace"
    modified = "modified"
    vacuum = "vacuum"


class OutputMode(str, Enum):
    text = "text"
    json = "json"


class CliRequest(BaseModel):
    command: Command
    input: str | None = None
    n: int | None = Field(default=None, ge=1)
    side: Side = Side.right
    member: Member = Member.A
    element: str | None = None
    method: Method = Method.vacuum
    output: OutputMode = OutputMode.text
    q_eval: str | None = None

    @field_validator("q_eval")
    @classmethod
    def _rational_point(cls, value: str | None) -> str | None:
        if value is None:
            return value
        try:
            Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"q-eval point must be a rational number, got {value!r}") from exc
        return value.strip()

    def q_point(self) -> Fraction | None:
        return None if self.q_eval is None else Fraction(self.q_eval)


class AxiomCheck(BaseModel):
    name: str
    passed: bool
    witness: list[Any] = Field(default_factory=list)
    detail: str = ""


class AxiomReport(BaseModel):
    subject: str
    checks: list[AxiomCheck] = Field(default_factory=list)

    @property
    def failures(self) -> list[AxiomCheck]:
        return [check for check in self.checks if not check.passed]

    @property
    def ok(self) -> bool:
        return not self.failures

    def check(self, name: str) -> AxiomCheck:
        for entry in self.checks:
            if entry.name == name:
                return entry
        raise KeyError(name)


class ErrorEntry(BaseModel):
    name: str
    message: str
    witness: list[Any] = Field(default_factory=list)


class CommandReport(BaseModel):
    command: Command
    input: str | None = None
    results: list[dict[str, Any]] = Field(default_factory=list)
    warnings: list[str] = Field(default_factory=list)
    errors: list[ErrorEntry] = Field(default_factory=list)


class JobRecord(BaseModel):
    job_id: UUID = Field(default_factory=uuid4)
    status: JobStatus = JobStatus.pending
    created_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
    updated_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
    request: CliRequest
    result: CommandReport | None = None
    error: str | None = None
