"""Text projections of a ProblemState.

``render_canonical`` produces PROBLEM_STATE.md. ``render_live_state`` is the
role-specific slice prepended to every agent call. Both are pure functions of
the state, so equal states render to identical bytes.
"""

from __future__ import annotations

from ..config import LIVE_STATE_BANNER
from ..types import AgentRole
from .model import FailureRecord, ProblemState, VerifiedResult

CANONICAL_SECTIONS = (
    "Problem",
    "Phase",
    "Plan",
    "Verified Results Ledger",
    "Confirmed Failures",
    "Exploration Findings",
)


def _indent_tail(text: str, pad: str = "  ") -> str:
    lines = text.strip("\n").splitlines() or [""]
    return "\n".join([lines[0]] + [pad + ln if ln else ln for ln in lines[1:]])


def _result_line(r: VerifiedResult) -> str:
    where = f"Plan v{r.plan_version}, Step {r.source_step}" if r.source_step else f"Plan v{r.plan_version}"
    return f"- [{r.category.value}] ({where}) {_indent_tail(r.text)}"


def _section_problem(s: ProblemState) -> str:
    return s.statement.strip("\n") or "(empty statement)"


def _section_phase(s: ProblemState) -> str:
    lines = [
        f"Phase: {s.current_phase.value}",
        f"Outcome: {s.outcome.value}",
        f"Plan version: {s.plan_version}",
    ]
    if s.plan:
        lines.append(f"Current step: {s.current_step} of {s.total_steps}")
        if 1 <= s.current_step <= s.total_steps:
            lines.append(f"Current step goal: {s.plan.goal(s.current_step)}")
    else:
        lines.append("Current step: none")
    lines += [
        f"Re-plans used: {s.replan_count}",
        f"Reasoner attempt: {s.reasoner_attempt_index}",
        f"Pure-reasoning mode: {'on' if s.pure_reasoning_mode else 'off'}",
    ]
    return "\n".join(lines)


def _section_plan(s: ProblemState) -> str:
    if not s.plan:
        return "(no plan yet)"
    out = []
    for ps in s.plan.steps:
        status = s.steps[ps.number - 1].status.value if ps.number <= len(s.steps) else "Pending"
        out.append(f"{ps.number}. {ps.goal} [{status}]")
    return "\n".join(out)


def _rescued(s: ProblemState) -> list[VerifiedResult]:
    out = list(s.rescued_results)
    for rec in s.failed_records:
        out.extend(rec.rescued_results)
    return out


def _section_ledger(s: ProblemState) -> str:
    lines = [_result_line(r) for r in s.verified_results] or ["(none)"]
    rescued = _rescued(s)
    if rescued:
        lines += ["", "### Rescued from earlier attempts"]
        lines += [_result_line(r) for r in rescued]
    return "\n".join(lines)


def _failure_block(i: int, rec: FailureRecord) -> str:
    lines = [f"### Failure {i}: Plan v{rec.plan_version_abandoned} abandoned"]
    if rec.trigger:
        lines.append(f"Trigger: {rec.trigger}")
    lines.append(f"Reason: {_indent_tail(rec.reason_summary)}")
    lines.append(f"Plan summary: {_indent_tail(rec.plan_summary)}")
    lines.append("Forbidden directions:")
    lines += [f"- {_indent_tail(d)}" for d in rec.forbidden_directions]
    if rec.reusable_results:
        lines.append("Reusable results:")
        lines += [f"- {_indent_tail(r)}" for r in rec.reusable_results]
    return "\n".join(lines)


def _section_failures(s: ProblemState) -> str:
    if not s.failed_records:
        return "(none)"
    return "\n\n".join(_failure_block(i, r) for i, r in enumerate(s.failed_records, 1))


def _section_findings(s: ProblemState) -> str:
    if not s.exploration_findings:
        return "(none)"
    return "\n\n".join(f"### Round {i}\n{f.strip()}" for i, f in enumerate(s.exploration_findings, 1))


_BUILDERS = {
    "Problem": _section_problem,
    "Phase": _section_phase,
    "Plan": _section_plan,
    "Verified Results Ledger": _section_ledger,
    "Confirmed Failures": _section_failures,
    "Exploration Findings": _section_findings,
}

_ROLE_SECTIONS = {
    AgentRole.REASONER: CANONICAL_SECTIONS,
    AgentRole.REASONER_NON_CODING: CANONICAL_SECTIONS,
    AgentRole.VERIFIER: CANONICAL_SECTIONS[:5],
    AgentRole.META: CANONICAL_SECTIONS,
}


def _join(sections: list[tuple[str, str]]) -> str:
    return "\n\n".join(f"## {name}\n{body}" for name, body in sections) + "\n"


def render_canonical(state: ProblemState) -> str:
    head = f"# Problem State: {state.problem_id}\n\n"
    return head + _join([(name, _BUILDERS[name](state)) for name in CANONICAL_SECTIONS])


def render_live_state(state: ProblemState, role: AgentRole, banner: str = LIVE_STATE_BANNER) -> str:
    sections = [(name, _BUILDERS[name](state)) for name in _ROLE_SECTIONS[role]]
    if role is not AgentRole.VERIFIER and state.hints:
        sections.append(("Strategy Hints", state.hints.strip()))
    if role is AgentRole.REASONER_NON_CODING:
        sections.append(
            ("Mode", "Pure-reasoning mode is active: do not execute code; "
                     "argue from the computational evidence already recorded.")
        )
    return f"{banner}\n\n" + _join(sections)
