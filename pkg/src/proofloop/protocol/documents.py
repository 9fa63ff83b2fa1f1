"""Builders for well-formed agent output documents.

Scripted fixtures and the stochastic backend use these so that everything
they emit goes through the same grammar the parsers enforce.
"""

from __future__ import annotations

from typing import Iterable, Sequence


def _section(name: str, body: str) -> str:
    return f"## {name}\n{body.strip()}\n"


def _bullets(items: Iterable[str]) -> str:
    return "\n".join(f"- {i}" for i in items)


def _join(parts: Iterable[str | None]) -> str:
    return "\n".join(p for p in parts if p)


def ledger(entries: Sequence[tuple[str, str]]) -> str:
    """``[(category, text), ...]`` as a Verified Results section body."""
    return "\n".join(f"- [{cat}] {text}" for cat, text in entries)


def verdict_doc(
    tag: str,
    *,
    target: int | None = None,
    objections: str | None = None,
    entries: Sequence[tuple[str, str]] = (),
    goal_gate: str = "PASS",
    logic_gate: str = "PASS",
    prose: str = "",
) -> str:
    return _join([
        prose.strip() + "\n" if prose else None,
        _section("Goal Gate", goal_gate),
        _section("Logic Gate", logic_gate),
        _section("Objections", objections) if objections else None,
        _section("Verified Results", ledger(entries)) if entries else None,
        _section("Verdict", tag),
        _section("TRACE_BACK_TO", str(target)) if target is not None else None,
    ])


def replan_doc(
    decision: str,
    reason: str,
    *,
    target: int | None = None,
    plan_summary: str | None = None,
    forbidden: Sequence[str] = (),
    reusable: Sequence[str] = (),
) -> str:
    head = f"{decision} {target}" if target is not None else decision
    return _join([
        _section("REPLAN_DECISION", head),
        _section("Reason_Summary", reason),
        _section("Plan_Summary", plan_summary) if plan_summary else None,
        _section("Forbidden_Directions", _bullets(forbidden)) if forbidden else None,
        _section("Reusable_Results", _bullets(reusable)) if reusable else None,
    ])


def intervention_doc(
    action: str,
    *,
    target: int | None = None,
    guidance: str = "",
    pure_reasoning: bool | None = None,
    diagnosis: str = "",
    partials: str | None = None,
) -> str:
    flag = None if pure_reasoning is None else ("YES" if pure_reasoning else "NO")
    return _join([
        _section("Diagnosis", diagnosis) if diagnosis else None,
        _section("Action_Type", action),
        _section("Trace_Back_To", str(target)) if target is not None else None,
        _section("Use_Pure_Reasoning", flag) if flag else None,
        _section("Extracted_Partials", partials) if partials else None,
        _section("Guidance", guidance) if guidance else None,
    ])


def exploration_doc(assessment: str, findings: str) -> str:
    return _join([_section("Findings", findings), _section("Assessment", assessment)])


def exploration_decision_doc(decision: str, reason: str = "") -> str:
    return _join([_section("Exploration_Decision", decision), _section("Reason", reason) if reason else None])


def plan_doc(goals: Sequence[str], preamble: str = "") -> str:
    steps = "\n".join(f"### Step {i}: {g}" for i, g in enumerate(goals, 1))
    return _join([preamble.strip() + "\n" if preamble else None, f"## Plan\n{steps}\n"])


def report_doc(
    body: str,
    *,
    verified: int = 0,
    easy: int = 0,
    hard: int = 0,
    plan_blocked: bool = False,
    entries: Sequence[tuple[str, str]] = (),
) -> str:
    claims = (
        ["- Claim checked by script. [verified]"] * verified
        + ["- Claim checkable by hand. [easy-verify]"] * easy
        + ["- Claim needing careful review. [hard-verify]"] * hard
    )
    return _join([
        _section("Report", body),
        _section("Claims", "\n".join(claims)) if claims else None,
        _section("Verified Results", ledger(entries)) if entries else None,
        _section("Status", "[plan-blocked]") if plan_blocked else None,
    ])


def solution_doc(body: str) -> str:
    return _section("Solution", body)
