"""Agent output grammar: strict parsers, document builders, instructions."""

from .instructions import Task, render_instruction
from .parsers import (
    detect_plan_blocked,
    extract_tags,
    extract_verified_results,
    parse_exploration,
    parse_exploration_decision,
    parse_meta_intervention,
    parse_plan,
    parse_replan_decision,
    parse_verdict,
)
from .types import (
    Assessment,
    Escalation,
    EscalationKind,
    ExplorationDecision,
    ExplorationOutcome,
    InterventionAction,
    MetaIntervention,
    ReplanDecision,
    ReplanTag,
    StructuralError,
    StructuralErrorKind,
    Verdict,
    VerdictTag,
)

__all__ = [
    "Assessment",
    "Escalation",
    "EscalationKind",
    "ExplorationDecision",
    "ExplorationOutcome",
    "InterventionAction",
    "MetaIntervention",
    "ReplanDecision",
    "ReplanTag",
    "StructuralError",
    "StructuralErrorKind",
    "Task",
    "Verdict",
    "VerdictTag",
    "detect_plan_blocked",
    "extract_tags",
    "extract_verified_results",
    "parse_exploration",
    "parse_exploration_decision",
    "parse_meta_intervention",
    "parse_plan",
    "parse_replan_decision",
    "parse_verdict",
    "render_instruction",
]
