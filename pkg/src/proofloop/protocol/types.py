"""Control tokens extracted from agent output."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from ..state.model import VerifiedResult


class VerdictTag(str, enum.Enum):
    ACCEPT = "ACCEPT"
    CHALLENGE = "CHALLENGE"
    TRACE_BACK = "TRACE_BACK"
    PROPOSE_REPLAN = "PROPOSE_REPLAN"


@dataclass
class Verdict:
    tag: VerdictTag
    target: int | None = None
    objections: str | None = None
    ledger_entries: list[VerifiedResult] = field(default_factory=list)
    gates: dict[str, str] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)


class ReplanTag(str, enum.Enum):
    CONTINUE = "CONTINUE"
    TRACE_BACK = "TRACE_BACK"
    APPROVE_REPLAN = "APPROVE_REPLAN"
    ABORT = "ABORT"


@dataclass
class ReplanDecision:
    tag: ReplanTag
    reason_summary: str = ""
    target: int | None = None
    plan_summary: str | None = None
    forbidden_directions: list[str] = field(default_factory=list)
    reusable_results: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


class InterventionAction(str, enum.Enum):
    RETRY_STEP = "RETRY_STEP"
    TRACE_BACK = "TRACE_BACK"
    PROPOSE_REPLAN = "PROPOSE_REPLAN"
    ABORT = "ABORT"


@dataclass
class MetaIntervention:
    action: InterventionAction
    target: int | None = None
    guidance: str = ""
    use_pure_reasoning: bool = False
    extracted_partials: str | None = None
    diagnosis: str = ""
    warnings: list[str] = field(default_factory=list)


class Assessment(str, enum.Enum):
    SOLVED = "SOLVED"
    PARTIALLY_SOLVED = "PARTIALLY_SOLVED"
    NEED_PLAN = "NEED_PLAN"
    UNKNOWN = "UNKNOWN"


@dataclass
class ExplorationOutcome:
    assessment: Assessment
    findings_digest: str = ""


class ExplorationDecision(str, enum.Enum):
    CONTINUE_EXPLORATION = "CONTINUE_EXPLORATION"
    PROCEED_TO_PLAN = "PROCEED_TO_PLAN"


class EscalationKind(str, enum.Enum):
    MISSING = "Missing"
    MALFORMED = "Malformed"
    OUT_OF_RANGE = "OutOfRange"


@dataclass(frozen=True)
class Escalation:
    """A malformed control document. Always routed as a re-plan proposal."""

    kind: EscalationKind
    reason: str
    route: str = "PROPOSE_REPLAN"


class StructuralErrorKind(str, enum.Enum):
    TOO_MANY_STEPS = "TooManySteps"
    EMPTY = "Empty"
    NON_CONTIGUOUS = "NonContiguous"
    DUPLICATE = "Duplicate"


@dataclass(frozen=True)
class StructuralError:
    kind: StructuralErrorKind
    detail: str = ""
