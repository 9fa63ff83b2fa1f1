"""The five-phase control loop.

The orchestrator never reads mathematics. Every branch it takes is decided by
a parsed control token, a counter, or a timeout flag. Its position is kept in
``ProblemState.stage``; each loop iteration performs at most one dispatch,
applies the result, and checkpoints, so a run can be resumed from any
checkpoint by replaying the remaining agent responses.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .agents.base import (
    AgentRequest,
    AgentResponse,
    Backend,
    RealClock,
    SessionDirective,
    SimulatedClock,
    dispatch,
)
from .config import Config
from .errors import EmptyDocumentError, InternalConsistencyError
from .events import Event, EventKind, EventLog, iso_time
from .naming import session_name
from .protocol import (
    Assessment,
    Escalation,
    EscalationKind,
    ExplorationDecision,
    InterventionAction,
    ReplanTag,
    StructuralError,
    Task,
    Verdict,
    VerdictTag,
    detect_plan_blocked,
    extract_tags,
    parse_exploration,
    parse_exploration_decision,
    parse_meta_intervention,
    parse_plan,
    parse_replan_decision,
    parse_verdict,
    render_instruction,
)
from .state import (
    ProblemState,
    StepState,
    Workspace,
    WorkspaceLock,
    apply_replan,
    apply_trace_back,
    atomic_write,
    finish,
    load,
    persist,
    record_accepted_step,
    render_live_state,
    set_phase,
)
from .stats import summarize_run
from .types import AgentRole, Outcome, Phase, StepStatus

log = logging.getLogger(__name__)

# Replan triggers.
VERIFIER_PROPOSED = "VerifierProposed"
PLAN_BLOCKED = "PlanBlocked"
STALEMATE = "Stalemate"
CHRONIC_TIMEOUTS = "ChronicTimeouts"
META_REQUESTED = "MetaRequested"


@dataclass
class RunOutcome:
    status: Outcome
    solution_path: str | None
    final_state: ProblemState


class Orchestrator:
    """Drives one problem workspace to a terminal outcome.

    ``on_checkpoint(state, n)`` is called after the n-th checkpoint of this
    session; raising from it simulates a crash at that point.
    """

    def __init__(
        self,
        config: Config,
        backend: Backend,
        state: ProblemState,
        clock=None,
        on_checkpoint: Callable[[ProblemState, int], None] | None = None,
    ):
        if state.workspace is None:
            raise ValueError("state must be bound to a workspace")
        self.config = config
        self.backend = backend
        self.state = state
        self.ws = Workspace(state.workspace)
        if clock is None:
            clock = SimulatedClock(state.clock_seconds) if config.simulated_clock else RealClock()
        self.clock = clock
        self.events = EventLog(self.ws.events_log)
        self.on_checkpoint = on_checkpoint
        self.checkpoints = 0

    # -- plumbing ---------------------------------------------------------

    def emit(self, kind: EventKind, **payload) -> Event:
        stamp = iso_time(self.clock.now(), simulated=self.clock.simulated)
        return self.events.emit(Event(stamp, kind, payload))

    def checkpoint(self) -> None:
        if self.clock.simulated:
            self.state.clock_seconds = self.clock.now()
        persist(self.state, self.events, durable=self.config.fsync)
        self.checkpoints += 1
        if self.on_checkpoint is not None:
            self.on_checkpoint(self.state, self.checkpoints)

    def enter(self, phase: Phase) -> None:
        set_phase(self.state, phase)
        self.emit(EventKind.PHASE_ENTER, phase=phase.value)

    def _reasoner_role(self) -> AgentRole:
        return AgentRole.REASONER_NON_CODING if self.state.pure_reasoning_mode else AgentRole.REASONER

    def _new_verifier_session(self, step: int) -> str:
        base = session_name(AgentRole.VERIFIER, self.state.problem_id, step=step)
        k = self.state.verifier_sessions.get(base, 0)
        self.state.verifier_sessions[base] = k + 1
        name = session_name(AgentRole.VERIFIER, self.state.problem_id, step=step, recreation=k)
        self.state.current_verifier_session = name
        return name

    def call(
        self,
        role: AgentRole,
        task: Task,
        *,
        step: int | None = None,
        verifier_session: str | None = None,
        **fields,
    ) -> AgentResponse:
        """Dispatch one agent call with live-state injection and accounting."""
        s = self.state
        if role.is_reasoner:
            name, fresh = s.reasoner_session_name, not s.reasoner_session_spawned
        elif role is AgentRole.META:
            name, fresh = s.meta_session_name, not s.meta_session_spawned
        else:
            if verifier_session is None:
                name, fresh = self._new_verifier_session(step or 0), True
            else:
                name, fresh = verifier_session, False
        directive = SessionDirective.fresh(name) if fresh else SessionDirective.resume(name)
        request = AgentRequest(
            role=role,
            session=directive,
            injected_state=render_live_state(s, role, self.config.live_state_banner),
            instruction=render_instruction(task, **({"step": step} if step is not None else {}), **fields),
            budget_seconds=self.config.budgets.for_role(role),
            grace_seconds=self.config.grace_seconds,
            task=task.value,
            step=step,
        )
        response = dispatch(self.backend, request, self.clock, s.stats, s.current_phase)
        if role.is_reasoner:
            s.reasoner_session_spawned = True
        elif role is AgentRole.META:
            s.meta_session_spawned = True
        self.emit(
            EventKind.DISPATCH,
            role=role.value,
            session=name,
            mode=directive.mode.value,
            task=task.value,
            phase=s.current_phase.value,
            step=step,
            wall=round(response.wall_seconds, 3),
            timed_out=response.timed_out,
        )
        return response

    def abort(self, reason: str) -> None:
        self.emit(EventKind.ABORTED, reason=reason)
        finish(self.state, Outcome.ABORTED, reason)
        self.state.stage = "done"

    def solved(self, via: str, solution_text: str) -> None:
        atomic_write(self.ws.solution_md, solution_text)
        self.state.solution_path = self.ws.rel(self.ws.solution_md)
        self.state.stats.solved_in_exploration = via == "exploration"
        self.emit(EventKind.SOLUTION_ACCEPTED, via=via)
        self.emit(EventKind.SOLVED, via=via, plan_version=self.state.plan_version)
        finish(self.state, Outcome.SOLVED)
        self.state.stage = "done"

    # -- main loop --------------------------------------------------------

    def run(self) -> RunOutcome:
        with WorkspaceLock(self.ws.path):
            while self.state.stage != "done":
                if len(self.state.stats.invocations) >= self.config.max_dispatches:
                    self.abort(f"dispatch budget of {self.config.max_dispatches} exhausted")
                else:
                    handler = getattr(self, f"_stage_{self.state.stage}", None)
                    if handler is None:
                        raise InternalConsistencyError(f"unknown stage {self.state.stage!r}")
                    handler()
                self.checkpoint()
            self.write_stats()
        return RunOutcome(self.state.outcome, self.state.solution_path, self.state)

    def write_stats(self) -> None:
        stats = summarize_run(self.ws.events_log, self.state)
        atomic_write(self.ws.stats_json, json.dumps(stats.to_dict(), indent=1) + "\n", self.config.fsync)

    # -- phase 0/1: setup and exploration --------------------------------

    def _stage_setup(self) -> None:
        self.enter(Phase.EXPLORATION)
        self.state.stage = "explore"

    def run_exploration(self) -> None:
        """One exploration round (dispatch + routing)."""
        self._stage_explore()

    def _stage_explore(self) -> None:
        s = self.state
        if s.exploration_rounds_used >= self.config.max_exploration_rounds:
            s.stage = "enter_planning"
            return
        s.exploration_rounds_used += 1
        s.exploration_rounds_total += 1
        resp = self.call(self._reasoner_role(), Task.EXPLORE, round=s.exploration_rounds_used)
        atomic_write(self.ws.exploration_md, resp.raw_output)
        outcome = parse_exploration(resp.raw_output)
        s.exploration_findings.append(f"[{outcome.assessment.value}] {outcome.findings_digest}")
        if outcome.assessment is Assessment.SOLVED:
            s.stage = "explore_review"
        elif outcome.assessment is Assessment.PARTIALLY_SOLVED:
            s.stage = "explore_decision"
        else:
            s.stage = "enter_planning"

    def _stage_explore_review(self) -> None:
        document = self.ws.exploration_md.read_text(encoding="utf-8")
        resp = self.call(AgentRole.VERIFIER, Task.EXPLORE_REVIEW, step=0, document=document)
        verdict = self._parse_verdict(resp.raw_output, 0)
        self._emit_verdict()
        if isinstance(verdict, Verdict) and verdict.tag is VerdictTag.ACCEPT:
            self.solved("exploration", document)
        else:
            # A rejected early solution is handled like a partial one.
            self.emit(EventKind.SOLUTION_REJECTED, via="exploration")
            self.state.stage = "explore_decision"

    def _stage_explore_decision(self) -> None:
        s = self.state
        if s.exploration_rounds_used >= self.config.max_exploration_rounds:
            s.stage = "enter_planning"
            return
        document = self.ws.exploration_md.read_text(encoding="utf-8")
        resp = self.call(AgentRole.META, Task.EXPLORE_DECISION, round=s.exploration_rounds_used, document=document)
        decision = parse_exploration_decision(resp.raw_output)
        s.stage = "explore" if decision is ExplorationDecision.CONTINUE_EXPLORATION else "enter_planning"

    # -- phase 2: planning -----------------------------------------------

    def _stage_enter_planning(self) -> None:
        self.enter(Phase.PLANNING)
        self.state.stage = "pre_planning" if self.config.pre_planning_analysis else "plan"

    def _stage_pre_planning(self) -> None:
        resp = self.call(AgentRole.META, Task.PRE_PLANNING, version=self.state.plan_version)
        # Hints are optional: a timeout or empty answer just means none.
        self.state.hints = "" if resp.timed_out else resp.raw_output.strip()
        self.state.stage = "plan"

    def run_planning(self) -> None:
        self._stage_plan()

    def _stage_plan(self) -> None:
        s, cfg = self.state, self.config
        s.plan_attempts += 1
        lo, hi = cfg.recommended_steps
        extra = f"Your previous plan was rejected: {s.rejection}" if s.rejection else ""
        resp = self.call(
            self._reasoner_role(), Task.PLAN,
            version=s.plan_version, min_steps=lo, max_steps=hi, hard_max=cfg.max_total_steps, extra=extra,
        )
        plan = parse_plan(resp.raw_output, version=s.plan_version, max_steps=cfg.max_total_steps)
        if isinstance(plan, StructuralError):
            s.rejection = f"{plan.kind.value}: {plan.detail}"
            if s.plan_attempts >= cfg.max_solution_retries:
                self.abort(f"plan structurally invalid after {s.plan_attempts} attempts ({s.rejection})")
            return
        atomic_write(self.ws.plan_md, resp.raw_output)
        s.plan = plan
        s.steps = [StepState(n) for n in range(1, plan.total_steps + 1)]
        s.current_step = 1
        s.plan_attempts = 0
        s.rejection = ""
        self.enter(Phase.STEP_EXECUTION)
        s.stage = "step"

    # -- phase 3: step execution -----------------------------------------

    def execute_step(self) -> None:
        self._stage_step()

    def _stage_step(self) -> None:
        s = self.state
        n = s.current_step
        st = s.step(n)
        st.status = StepStatus.EXECUTING
        extra = f"Guidance from the Meta-Strategist:\n{s.guidance}" if s.guidance else ""
        resp = self.call(
            self._reasoner_role(), Task.STEP, step=n, version=s.plan_version, goal=s.plan.goal(n), extra=extra
        )
        s.guidance = ""
        if resp.timed_out:
            self._on_timeout(st, resp)
            return
        st.consecutive_timeouts = 0
        atomic_write(self.ws.step_report(n), resp.raw_output)
        if detect_plan_blocked(resp.raw_output):
            self.route_replan(PLAN_BLOCKED, resp.raw_output)
            return
        st.status = StepStatus.UNDER_REVIEW
        s.stage = "review"

    def _on_timeout(self, st: StepState, resp: AgentResponse) -> None:
        s = self.state
        st.timeout_count += 1
        st.consecutive_timeouts += 1
        s.partial_output = resp.raw_output
        self.emit(EventKind.TIMEOUT, step=st.number, consecutive=st.consecutive_timeouts,
                  wall=round(resp.wall_seconds, 3))
        if st.consecutive_timeouts >= self.config.chronic_timeout_threshold:
            self.route_replan(CHRONIC_TIMEOUTS, resp.raw_output)
        else:
            s.stage = "intervention"

    def _parse_verdict(self, text: str, step: int) -> Verdict | Escalation:
        try:
            verdict = parse_verdict(text, step)
        except EmptyDocumentError:
            verdict = Escalation(EscalationKind.MISSING, "empty verifier output")
        payload = {"step": step}
        if isinstance(verdict, Verdict):
            payload["verdict"] = verdict.tag.value
            if verdict.target is not None:
                payload["target"] = verdict.target
        else:
            payload["verdict"] = "ESCALATION"
            payload["reason"] = verdict.reason
        self._last_verdict_payload = payload
        return verdict

    def _emit_verdict(self, **extra) -> None:
        self.emit(EventKind.VERDICT_PARSED, **self._last_verdict_payload, **extra)

    def _stage_review(self) -> None:
        s = self.state
        n = s.current_step
        report = self.ws.step_report(n).read_text(encoding="utf-8")
        resp = self.call(
            AgentRole.VERIFIER, Task.REVIEW, step=n, version=s.plan_version, goal=s.plan.goal(n), document=report
        )
        self._apply_verdict(self._parse_verdict(resp.raw_output, n), report)

    def _apply_verdict(self, verdict: Verdict | Escalation, report: str) -> None:
        s = self.state
        n = s.current_step
        st = s.step(n)
        if isinstance(verdict, Escalation):
            self._emit_verdict()
            self.route_replan(VERIFIER_PROPOSED, f"Malformed verifier output: {verdict.reason}")
            return
        tag = verdict.tag
        if tag is VerdictTag.ACCEPT:
            tags = extract_tags(report)
            self._emit_verdict(tags=list(tags.as_tuple()))
            if st.status is StepStatus.IN_CHALLENGE:
                st.challenge_rounds += 1
            record_accepted_step(s, n, self.ws.rel(self.ws.step_report(n)), verdict.ledger_entries, tags)
            s.stats.step_reports += 1
            s.stats.tag_tally = s.stats.tag_tally + tags
            s.objections = ""
            if s.current_phase is Phase.SOLUTION_GENERATION:
                self.emit(EventKind.PHASE_ENTER, phase=Phase.SOLUTION_GENERATION.value)
                s.stage = "solution"
            else:
                s.stage = "step"
            return
        self._emit_verdict()
        if tag is VerdictTag.CHALLENGE:
            st.challenge_rounds += 1
            st.status = StepStatus.IN_CHALLENGE
            s.objections = verdict.objections or "(no objections given)"
            self._append_debate(n, f"## Verifier round {st.challenge_rounds}\n{s.objections}\n")
            if st.challenge_rounds >= self.config.challenge_bound:
                self.emit(EventKind.STALEMATE, step=n, rounds=st.challenge_rounds)
                self.route_replan(STALEMATE, s.objections)
            else:
                s.stage = "defend"
        elif tag is VerdictTag.TRACE_BACK:
            self.trace_back(verdict.target, source="verifier")
        else:
            self.route_replan(VERIFIER_PROPOSED, report)

    def _append_debate(self, n: int, text: str) -> None:
        path = self.ws.step_debate(n)
        prior = path.read_text(encoding="utf-8") if path.exists() else ""
        atomic_write(path, prior + text + "\n", self.config.fsync)

    def run_challenge_loop(self) -> None:
        """Advance the debate on the current step by one half-round."""
        handler = self._stage_defend if self.state.stage == "defend" else self._stage_re_review
        handler()

    def _stage_defend(self) -> None:
        s = self.state
        n = s.current_step
        st = s.step(n)
        resp = self.call(self._reasoner_role(), Task.DEFEND, step=n, round=st.challenge_rounds,
                         document=s.objections)
        if resp.timed_out:
            self._on_timeout(st, resp)
            return
        st.consecutive_timeouts = 0
        self.emit(EventKind.CHALLENGE_ROUND, step=n, round=st.challenge_rounds)
        atomic_write(self.ws.step_report(n), resp.raw_output)
        self._append_debate(n, f"## Reasoner defense {st.challenge_rounds}\n{resp.raw_output}\n")
        if detect_plan_blocked(resp.raw_output):
            self.route_replan(PLAN_BLOCKED, resp.raw_output)
            return
        s.stage = "re_review"

    def _stage_re_review(self) -> None:
        s = self.state
        n = s.current_step
        report = self.ws.step_report(n).read_text(encoding="utf-8")
        resp = self.call(AgentRole.VERIFIER, Task.RE_REVIEW, step=n, round=s.step(n).challenge_rounds,
                         document=report, verifier_session=s.current_verifier_session)
        self._apply_verdict(self._parse_verdict(resp.raw_output, n), report)

    def trace_back(self, target: int, source: str) -> None:
        s = self.state
        frm = s.current_step
        apply_trace_back(s, target)
        self.emit(EventKind.TRACE_BACK, source=source, to=target, **{"from": frm},
                  attempt=s.reasoner_attempt_index)
        s.objections = ""
        s.stage = "step"

    # -- timeouts and interventions --------------------------------------

    def handle_timeout(self) -> None:
        self._stage_intervention()

    def _stage_intervention(self) -> None:
        s = self.state
        n = s.current_step
        st = s.step(n)
        resp = self.call(AgentRole.META, Task.INTERVENTION, step=n, timeouts=st.consecutive_timeouts,
                         document=s.partial_output)
        iv = parse_meta_intervention(resp.raw_output, n)
        if isinstance(iv, Escalation):
            self.emit(EventKind.META_INTERVENTION, step=n, action="ESCALATION", reason=iv.reason)
            self.route_replan(META_REQUESTED, s.partial_output)
            return
        self.emit(EventKind.META_INTERVENTION, step=n, action=iv.action.value, target=iv.target,
                  pure_reasoning=iv.use_pure_reasoning)
        if iv.use_pure_reasoning and not s.pure_reasoning_mode:
            s.pure_reasoning_mode = True
            self.emit(EventKind.PURE_REASONING_ON, step=n)
        s.partial_output = ""
        guidance = "\n\n".join(x for x in (iv.diagnosis, iv.guidance, iv.extracted_partials or "") if x)
        if iv.action is InterventionAction.RETRY_STEP:
            st.status = StepStatus.PENDING
            s.guidance = guidance
            s.stage = "step"
        elif iv.action is InterventionAction.TRACE_BACK:
            self.trace_back(iv.target, source="meta")
            s.guidance = guidance
        elif iv.action is InterventionAction.PROPOSE_REPLAN:
            self.route_replan(META_REQUESTED, guidance)
        else:
            self.abort("Meta-Strategist aborted during a timeout intervention")

    # -- re-planning ------------------------------------------------------

    def route_replan(self, trigger: str, context: str) -> None:
        s = self.state
        s.replan_trigger = trigger
        s.replan_redispatched = False
        s.partial_output = context
        self.emit(EventKind.REPLAN_PROPOSED, trigger=trigger, step=s.current_step)
        s.stage = "replan_decision"

    def decide_replan(self) -> None:
        self._stage_replan_decision()

    def _stage_replan_decision(self) -> None:
        s, cfg = self.state, self.config
        n = s.current_step
        resp = self.call(AgentRole.META, Task.REPLAN_DECISION, step=n, trigger=s.replan_trigger,
                         document=s.partial_output)
        decision = parse_replan_decision(resp.raw_output, n)
        if isinstance(decision, Escalation):
            self.emit(EventKind.REPLAN_DECIDED, decision="ESCALATION", applied=False, reason=decision.reason)
            if not s.replan_redispatched:
                s.replan_redispatched = True
                return
            self.abort("malformed re-plan decision twice")
            return
        trigger = s.replan_trigger or ""
        s.replan_trigger = None
        s.replan_redispatched = False
        s.partial_output = ""
        st = s.step(n)
        if decision.tag is ReplanTag.CONTINUE:
            self.emit(EventKind.REPLAN_DECIDED, decision="CONTINUE", applied=False)
            st.status = StepStatus.PENDING
            st.challenge_rounds = 0
            st.consecutive_timeouts = 0
            s.objections = ""
            s.stage = "step"
        elif decision.tag is ReplanTag.TRACE_BACK:
            self.emit(EventKind.REPLAN_DECIDED, decision="TRACE_BACK", applied=False, target=decision.target)
            self.trace_back(decision.target, source="replan")
        elif decision.tag is ReplanTag.ABORT:
            self.emit(EventKind.REPLAN_DECIDED, decision="ABORT", applied=False)
            self.abort("Meta-Strategist aborted the problem")
        else:
            applied = s.replan_count < cfg.max_replans
            self.emit(EventKind.REPLAN_DECIDED, decision="APPROVE_REPLAN", applied=applied,
                      forbidden=len(decision.forbidden_directions), warnings=decision.warnings)
            if not applied:
                self.abort(f"re-plan budget of {cfg.max_replans} exhausted")
                return
            apply_replan(s, decision, cfg, trigger=trigger)
            s.objections = ""
            s.hints = ""
            self.emit(EventKind.PHASE_ENTER, phase=s.current_phase.value)
            s.stage = "explore" if s.current_phase is Phase.EXPLORATION else (
                "pre_planning" if cfg.pre_planning_analysis else "plan")

    # -- phase 4: solution -----------------------------------------------

    def generate_solution(self) -> None:
        self._stage_solution()

    def _stage_solution(self) -> None:
        s = self.state
        extra = f"The previous draft was rejected:\n{s.rejection}" if s.rejection else ""
        resp = self.call(self._reasoner_role(), Task.SOLUTION, version=s.plan_version, extra=extra)
        atomic_write(self.ws.solution_md, resp.raw_output)
        if resp.timed_out:
            self._reject_solution("solution draft timed out")
            return
        s.stage = "solution_review"

    def _stage_solution_review(self) -> None:
        draft = self.ws.solution_md.read_text(encoding="utf-8")
        resp = self.call(AgentRole.VERIFIER, Task.SOLUTION_REVIEW, step=0, document=draft)
        verdict = self._parse_verdict(resp.raw_output, 0)
        self._emit_verdict()
        if isinstance(verdict, Verdict) and verdict.tag is VerdictTag.ACCEPT:
            if self.config.meta_whole_solution_review:
                self.state.stage = "solution_meta_review"
            else:
                self.solved("solution", draft)
        else:
            self._reject_solution(_objections(verdict))

    def _stage_solution_meta_review(self) -> None:
        draft = self.ws.solution_md.read_text(encoding="utf-8")
        resp = self.call(AgentRole.META, Task.SOLUTION_META_REVIEW, document=draft)
        verdict = self._parse_verdict(resp.raw_output, 0)
        self._emit_verdict(reviewer="meta")
        if isinstance(verdict, Verdict) and verdict.tag is VerdictTag.ACCEPT:
            self.solved("solution", draft)
        else:
            self._reject_solution(_objections(verdict))

    def _reject_solution(self, reason: str) -> None:
        s = self.state
        self.emit(EventKind.SOLUTION_REJECTED, via="solution", retries_used=s.solution_retries_used)
        if s.solution_retries_used >= self.config.max_solution_retries:
            self.abort(f"solution rejected {s.solution_retries_used + 1} times")
            return
        s.solution_retries_used += 1
        s.rejection = reason
        s.stage = "solution"


def _objections(verdict: Verdict | Escalation) -> str:
    if isinstance(verdict, Escalation):
        return f"review output was malformed: {verdict.reason}"
    return verdict.objections or f"verdict {verdict.tag.value}"


def run_problem(
    config: Config,
    backend: Backend,
    state: ProblemState,
    on_checkpoint: Callable[[ProblemState, int], None] | None = None,
) -> RunOutcome:
    """Run ``state`` to a terminal outcome (fresh or resumed)."""
    return Orchestrator(config, backend, state, on_checkpoint=on_checkpoint).run()


def resume_problem(workspace: str | Path, backend: Backend, config: Config | None = None, **kw) -> RunOutcome:
    state = load(workspace)
    if config is None:
        cfg_path = Workspace(workspace) / "config.json"
        config = Config.from_dict(json.loads(cfg_path.read_text())) if cfg_path.exists() else Config()
    return run_problem(config, backend, state, **kw)
