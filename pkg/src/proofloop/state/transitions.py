"""State transitions. Each mutates the state in place and returns it."""

from __future__ import annotations

import dataclasses
import json
import shutil
from pathlib import Path
from typing import TYPE_CHECKING, Iterable

from ..config import Config
from ..errors import InternalConsistencyError, ProofloopError, WorkspaceExistsError
from ..naming import session_name, validate_problem_id
from ..stats import RunStats
from ..types import PHASE_EDGES, AgentRole, Category, Outcome, Phase, StepStatus, TagTally
from .model import ArchiveEntry, FailureRecord, ProblemState, VerifiedResult
from .store import Workspace, atomic_write, persist

if TYPE_CHECKING:
    from ..protocol.types import ReplanDecision


class TraceBackRangeError(ProofloopError, ValueError):
    """Trace-back target outside ``1..current_step``."""


def set_phase(state: ProblemState, phase: Phase) -> ProblemState:
    if phase is not state.current_phase and phase not in PHASE_EDGES[state.current_phase]:
        raise InternalConsistencyError(
            f"illegal phase transition {state.current_phase.value} -> {phase.value}"
        )
    state.current_phase = phase
    return state


def new_problem_state(
    problem_id: str,
    statement: str,
    config: Config | None = None,
    workdir: str | Path = ".",
) -> ProblemState:
    """Create and persist a fresh workspace under ``<workdir>/scratch/<id>``."""
    validate_problem_id(problem_id)
    config = config or Config()
    ws = Workspace.for_problem(workdir, problem_id)
    if ws.path.exists() and any(ws.path.iterdir()):
        raise WorkspaceExistsError(f"workspace {ws.path} already exists")
    ws.code_dir.mkdir(parents=True, exist_ok=True)
    atomic_write(ws.problem_md, statement)
    atomic_write(ws / "config.json", json.dumps(config.to_dict(), indent=1) + "\n")

    state = ProblemState(
        problem_id=problem_id,
        statement=statement,
        reasoner_session_name=session_name(AgentRole.REASONER, problem_id, attempt=1),
        meta_session_name=session_name(AgentRole.META, problem_id),
        stats=RunStats(problem_id=problem_id),
    )
    state.workspace = ws.path
    persist(state)
    return state


def _bump_attempt(state: ProblemState) -> None:
    state.reasoner_attempt_index += 1
    state.reasoner_session_name = session_name(
        AgentRole.REASONER, state.problem_id, attempt=state.reasoner_attempt_index
    )
    state.reasoner_session_spawned = False


def _move(ws: Workspace | None, sources: Iterable[Path], dest: Path) -> list[str]:
    if ws is None:
        return []
    moved = []
    for src in sources:
        if src.exists():
            dest.mkdir(parents=True, exist_ok=True)
            target = dest / src.name
            shutil.move(str(src), str(target))
            moved.append(ws.rel(target))
    return moved


def _step_artifacts(ws: Workspace, n: int) -> list[Path]:
    paths = [ws.step_report(n), ws.step_debate(n)]
    if ws.code_dir.exists():
        paths += sorted(ws.code_dir.glob(f"*step{n:02d}_*"))
    return paths


def _key(r: VerifiedResult) -> tuple:
    return (r.category, r.text, r.plan_version)


def record_accepted_step(
    state: ProblemState,
    step_number: int,
    report: str | Path | None,
    ledger_entries: list[VerifiedResult],
    tags: TagTally | None = None,
) -> ProblemState:
    if state.current_phase is not Phase.STEP_EXECUTION or state.plan is None:
        raise InternalConsistencyError("no step is being executed")
    if step_number != state.current_step:
        raise InternalConsistencyError(
            f"accepting step {step_number} while current step is {state.current_step}"
        )
    if report is not None and state.workspace is not None:
        path = Path(state.workspace) / report
        if not path.exists():
            raise InternalConsistencyError(f"accepted step {step_number} has no report at {path}")
    grounded = bool(tags and tags.verified > 0)
    for entry in ledger_entries:
        entry = dataclasses.replace(
            entry,
            source_step=step_number,
            plan_version=state.plan_version,
            code_grounded=entry.category is Category.COMPUTATION and grounded,
        )
        # A claim re-confirmed after a trace-back is already on record.
        state.rescued_results = [r for r in state.rescued_results if _key(r) != _key(entry)]
        if all(_key(r) != _key(entry) for r in state.verified_results):
            state.verified_results.append(entry)
    st = state.step(step_number)
    st.status = StepStatus.ACCEPTED
    st.consecutive_timeouts = 0
    st.report_path = str(report) if report is not None else None
    if step_number == state.total_steps:
        set_phase(state, Phase.SOLUTION_GENERATION)
    else:
        state.current_step = step_number + 1
    return state


def apply_trace_back(state: ProblemState, target: int) -> ProblemState:
    """Archive steps ``target..current_step`` and re-enter at ``target``."""
    if state.current_phase is not Phase.STEP_EXECUTION:
        raise InternalConsistencyError("trace-back outside step execution")
    last = state.current_step
    if not 1 <= target <= last:
        raise TraceBackRangeError(f"trace-back target {target} outside 1..{last}")

    ws = Workspace(state.workspace) if state.workspace else None
    k = state.plan_version
    idx = 1 + sum(1 for a in state.archives if a.kind == "trace_back" and a.plan_version == k)
    dest_rel = f"archive/plan-v{k}/traceback-{idx:02d}"
    artifacts: list[str] = []
    if ws is not None:
        for n in range(target, last + 1):
            artifacts += _move(ws, _step_artifacts(ws, n), ws.path / dest_rel)
    state.archives.append(ArchiveEntry(k, (target, last), artifacts, "trace_back", dest_rel))

    for n in range(target, last + 1):
        st = state.step(n)
        st.status = StepStatus.ARCHIVED
        st.challenge_rounds = 0
        st.report_path = None
    state.step(target).trace_back_count += 1

    kept, staged = [], []
    for r in state.verified_results:
        if r.source_step < target:
            kept.append(r)
        elif r.category is Category.COMPUTATION and r.code_grounded:
            kept.append(dataclasses.replace(r, rescued=True))
        else:
            staged.append(dataclasses.replace(r, rescued=True))
    state.verified_results = kept
    seen = {_key(r) for r in state.rescued_results}
    for r in staged:
        if _key(r) not in seen:
            seen.add(_key(r))
            state.rescued_results.append(r)

    state.current_step = target
    _bump_attempt(state)
    state.stats.trace_backs += 1
    return state


def apply_replan(state: ProblemState, decision: "ReplanDecision", config: Config,
                 trigger: str = "") -> ProblemState:
    """Abandon the current plan, recording why and what is now forbidden."""
    from ..protocol.types import ReplanTag

    if decision.tag is not ReplanTag.APPROVE_REPLAN:
        raise InternalConsistencyError(f"apply_replan given {decision.tag.value}")
    if not decision.forbidden_directions:
        raise InternalConsistencyError("approved re-plan without forbidden directions")
    if state.replan_count >= config.max_replans:
        return finish(state, Outcome.ABORTED, f"re-plan budget of {config.max_replans} exhausted")

    ws = Workspace(state.workspace) if state.workspace else None
    k = state.plan_version
    artifacts: list[str] = []
    if ws is not None:
        sources = [ws.plan_md]
        for n in range(1, state.total_steps + 1):
            sources += _step_artifacts(ws, n)
        artifacts = _move(ws, sources, ws.archive_dir(k))
        ws.archive_dir(k).mkdir(parents=True, exist_ok=True)
    state.archives.append(ArchiveEntry(k, None, artifacts, "replan", f"archive/plan-v{k}"))

    rescued = [dataclasses.replace(r, rescued=True) for r in state.verified_results + state.rescued_results]
    state.failed_records.append(
        FailureRecord(
            plan_version_abandoned=k,
            reason_summary=decision.reason_summary,
            plan_summary=decision.plan_summary or "",
            forbidden_directions=list(decision.forbidden_directions),
            rescued_results=rescued,
            reusable_results=list(decision.reusable_results),
            trigger=trigger,
        )
    )
    state.replan_count += 1
    state.plan_version += 1
    _bump_attempt(state)
    state.plan = None
    state.steps = []
    state.current_step = 0
    state.verified_results = []
    state.rescued_results = []
    state.pure_reasoning_mode = False
    state.exploration_rounds_used = 0
    state.plan_attempts = 0
    state.stats.replans += 1
    set_phase(state, Phase.EXPLORATION if config.re_explore_after_replan else Phase.PLANNING)
    return state


def finish(state: ProblemState, outcome: Outcome, reason: str = "") -> ProblemState:
    """Enter the terminal phase and snapshot the final plan under plan-vK."""
    if outcome is Outcome.IN_PROGRESS:
        raise InternalConsistencyError("finish() needs a terminal outcome")
    state.outcome = outcome
    state.abort_reason = reason if outcome is Outcome.ABORTED else ""
    set_phase(state, Phase.DONE)
    state.stats.outcome = outcome
    k = state.plan_version
    artifacts: list[str] = []
    if state.workspace is not None:
        ws = Workspace(state.workspace)
        dest = ws.archive_dir(k)
        dest.mkdir(parents=True, exist_ok=True)
        if ws.plan_md.exists():
            shutil.copy2(ws.plan_md, dest / "plan.md")
            artifacts.append(ws.rel(dest / "plan.md"))
    state.archives.append(ArchiveEntry(k, None, artifacts, "terminal", f"archive/plan-v{k}"))
    return state
