"""Per-problem state: model, persistence, rendering, transitions."""

from .model import (
    ArchiveEntry,
    FailureRecord,
    Plan,
    PlanStep,
    ProblemState,
    StepState,
    VerifiedResult,
)
from .render import LIVE_STATE_BANNER, render_canonical, render_live_state
from .store import Workspace, WorkspaceLock, atomic_write, load, persist
from .transitions import (
    TraceBackRangeError,
    apply_replan,
    apply_trace_back,
    finish,
    new_problem_state,
    record_accepted_step,
    set_phase,
)

__all__ = [
    "ArchiveEntry",
    "FailureRecord",
    "LIVE_STATE_BANNER",
    "Plan",
    "PlanStep",
    "ProblemState",
    "StepState",
    "TraceBackRangeError",
    "VerifiedResult",
    "Workspace",
    "WorkspaceLock",
    "apply_replan",
    "apply_trace_back",
    "atomic_write",
    "finish",
    "load",
    "new_problem_state",
    "persist",
    "record_accepted_step",
    "render_canonical",
    "render_live_state",
    "set_phase",
]
