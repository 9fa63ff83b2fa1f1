"""The per-problem record and its parts."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ..stats import RunStats
from ..types import Category, Outcome, Phase, StepStatus

SCHEMA_VERSION = 1


@dataclass
class PlanStep:
    number: int
    goal: str


@dataclass
class Plan:
    version: int
    steps: list[PlanStep]

    @property
    def total_steps(self) -> int:
        return len(self.steps)

    def goal(self, number: int) -> str:
        return self.steps[number - 1].goal

    def to_dict(self) -> dict[str, Any]:
        return {
            "version": self.version,
            "total_steps": self.total_steps,
            "steps": [{"number": s.number, "goal": s.goal} for s in self.steps],
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Plan":
        return cls(d["version"], [PlanStep(s["number"], s["goal"]) for s in d["steps"]])


@dataclass
class StepState:
    number: int
    status: StepStatus = StepStatus.PENDING
    challenge_rounds: int = 0
    trace_back_count: int = 0
    timeout_count: int = 0
    consecutive_timeouts: int = 0
    report_path: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "number": self.number,
            "status": self.status.value,
            "challenge_rounds": self.challenge_rounds,
            "trace_back_count": self.trace_back_count,
            "timeout_count": self.timeout_count,
            "consecutive_timeouts": self.consecutive_timeouts,
            "report_path": self.report_path,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "StepState":
        return cls(
            number=d["number"],
            status=StepStatus(d["status"]),
            challenge_rounds=d["challenge_rounds"],
            trace_back_count=d["trace_back_count"],
            timeout_count=d["timeout_count"],
            consecutive_timeouts=d.get("consecutive_timeouts", 0),
            report_path=d.get("report_path"),
        )


@dataclass
class VerifiedResult:
    category: Category
    text: str
    source_step: int = 0
    plan_version: int = 1
    rescued: bool = False
    # Computation entries from a report carrying [verified] claims.
    code_grounded: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {
            "category": self.category.value,
            "text": self.text,
            "source_step": self.source_step,
            "plan_version": self.plan_version,
            "rescued": self.rescued,
            "code_grounded": self.code_grounded,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "VerifiedResult":
        return cls(
            category=Category(d["category"]),
            text=d["text"],
            source_step=d["source_step"],
            plan_version=d["plan_version"],
            rescued=d["rescued"],
            code_grounded=d.get("code_grounded", False),
        )


@dataclass
class FailureRecord:
    plan_version_abandoned: int
    reason_summary: str
    plan_summary: str
    forbidden_directions: list[str]
    rescued_results: list[VerifiedResult] = field(default_factory=list)
    reusable_results: list[str] = field(default_factory=list)
    trigger: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "plan_version_abandoned": self.plan_version_abandoned,
            "reason_summary": self.reason_summary,
            "plan_summary": self.plan_summary,
            "forbidden_directions": list(self.forbidden_directions),
            "rescued_results": [r.to_dict() for r in self.rescued_results],
            "reusable_results": list(self.reusable_results),
            "trigger": self.trigger,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "FailureRecord":
        return cls(
            plan_version_abandoned=d["plan_version_abandoned"],
            reason_summary=d["reason_summary"],
            plan_summary=d["plan_summary"],
            forbidden_directions=list(d["forbidden_directions"]),
            rescued_results=[VerifiedResult.from_dict(r) for r in d["rescued_results"]],
            reusable_results=list(d.get("reusable_results", [])),
            trigger=d.get("trigger", ""),
        )


@dataclass
class ArchiveEntry:
    plan_version: int
    # Inclusive [M, N]; None when the whole plan was archived.
    archived_step_range: tuple[int, int] | None
    artifacts: list[str]
    kind: str = "trace_back"
    directory: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "plan_version": self.plan_version,
            "archived_step_range": list(self.archived_step_range) if self.archived_step_range else None,
            "artifacts": list(self.artifacts),
            "kind": self.kind,
            "directory": self.directory,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ArchiveEntry":
        rng = d.get("archived_step_range")
        return cls(
            plan_version=d["plan_version"],
            archived_step_range=tuple(rng) if rng else None,
            artifacts=list(d["artifacts"]),
            kind=d.get("kind", "trace_back"),
            directory=d.get("directory", ""),
        )


# Fields written as-is (JSON scalars, string lists, or string dicts).
_PLAIN_FIELDS = (
    "problem_id",
    "statement",
    "plan_version",
    "current_step",
    "replan_count",
    "exploration_rounds_used",
    "exploration_rounds_total",
    "solution_retries_used",
    "exploration_findings",
    "reasoner_attempt_index",
    "reasoner_session_name",
    "meta_session_name",
    "pure_reasoning_mode",
    "stage",
    "replan_trigger",
    "replan_redispatched",
    "plan_attempts",
    "guidance",
    "partial_output",
    "objections",
    "rejection",
    "hints",
    "reasoner_session_spawned",
    "meta_session_spawned",
    "verifier_sessions",
    "current_verifier_session",
    "solution_path",
    "events_committed",
    "clock_seconds",
    "abort_reason",
)


@dataclass
class ProblemState:
    problem_id: str
    statement: str
    current_phase: Phase = Phase.SETUP
    plan: Plan | None = None
    plan_version: int = 1
    current_step: int = 0
    replan_count: int = 0
    exploration_rounds_used: int = 0
    exploration_rounds_total: int = 0
    solution_retries_used: int = 0
    steps: list[StepState] = field(default_factory=list)
    verified_results: list[VerifiedResult] = field(default_factory=list)
    failed_records: list[FailureRecord] = field(default_factory=list)
    exploration_findings: list[str] = field(default_factory=list)
    reasoner_attempt_index: int = 1
    reasoner_session_name: str = ""
    meta_session_name: str = ""
    pure_reasoning_mode: bool = False
    stats: RunStats = field(default_factory=RunStats)
    outcome: Outcome = Outcome.IN_PROGRESS

    # Staging list for results moved out of the active ledger by trace-back.
    rescued_results: list[VerifiedResult] = field(default_factory=list)
    archives: list[ArchiveEntry] = field(default_factory=list)

    # Fine-grained control position; every decision is recomputed from these.
    stage: str = "setup"
    replan_trigger: str | None = None
    replan_redispatched: bool = False
    plan_attempts: int = 0
    guidance: str = ""
    partial_output: str = ""
    objections: str = ""
    rejection: str = ""
    hints: str = ""
    reasoner_session_spawned: bool = False
    meta_session_spawned: bool = False
    verifier_sessions: dict[str, int] = field(default_factory=dict)
    current_verifier_session: str | None = None
    solution_path: str | None = None
    events_committed: int = 0
    clock_seconds: float = 0.0
    abort_reason: str = ""

    # Runtime only; never serialized.
    workspace: Path | None = field(default=None, compare=False, repr=False)

    @property
    def total_steps(self) -> int:
        return self.plan.total_steps if self.plan else 0

    def step(self, number: int) -> StepState:
        if not 1 <= number <= len(self.steps):
            raise IndexError(f"no step {number} in the current plan")
        return self.steps[number - 1]

    @property
    def forbidden_directions(self) -> list[str]:
        return [d for rec in self.failed_records for d in rec.forbidden_directions]

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"schema_version": SCHEMA_VERSION}
        for name in _PLAIN_FIELDS:
            value = getattr(self, name)
            d[name] = list(value) if isinstance(value, list) else (dict(value) if isinstance(value, dict) else value)
        d["current_phase"] = self.current_phase.value
        d["total_steps"] = self.total_steps
        d["plan"] = self.plan.to_dict() if self.plan else None
        d["steps"] = [s.to_dict() for s in self.steps]
        d["verified_results"] = [r.to_dict() for r in self.verified_results]
        d["failed_records"] = [r.to_dict() for r in self.failed_records]
        d["rescued_results"] = [r.to_dict() for r in self.rescued_results]
        d["archives"] = [a.to_dict() for a in self.archives]
        d["stats"] = self.stats.to_dict()
        d["outcome"] = self.outcome.value
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ProblemState":
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {d.get('schema_version')!r}")
        kwargs = {name: d[name] for name in _PLAIN_FIELDS}
        return cls(
            current_phase=Phase(d["current_phase"]),
            plan=Plan.from_dict(d["plan"]) if d["plan"] else None,
            steps=[StepState.from_dict(s) for s in d["steps"]],
            verified_results=[VerifiedResult.from_dict(r) for r in d["verified_results"]],
            failed_records=[FailureRecord.from_dict(r) for r in d["failed_records"]],
            rescued_results=[VerifiedResult.from_dict(r) for r in d["rescued_results"]],
            archives=[ArchiveEntry.from_dict(a) for a in d["archives"]],
            stats=RunStats.from_dict(d["stats"]),
            outcome=Outcome(d["outcome"]),
            **kwargs,
        )
