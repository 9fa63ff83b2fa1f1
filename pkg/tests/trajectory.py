"""Event-log checks shared by the unit and acceptance suites.

Each ``check_*`` function returns a list of human-readable violations; an
empty list means the trajectory satisfies the property.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from proofloop.agents import AgentRequest, AgentResponse
from proofloop.config import Config
from proofloop.events import Event, EventKind, read_events
from proofloop.state import ProblemState, Workspace
from proofloop.types import AgentRole, Outcome, StepStatus

REASONER_ROLES = {AgentRole.REASONER.value, AgentRole.REASONER_NON_CODING.value}


def events_of(state: ProblemState) -> list[Event]:
    events, bad = read_events(Workspace(state.workspace).events_log)
    assert bad == 0, f"{bad} corrupt event lines"
    return events


def _budget(config: Config, role: str) -> float:
    return config.budgets.for_role(AgentRole(role))


def _is_replan(e: Event) -> bool:
    return e.kind is EventKind.REPLAN_DECIDED and e.payload.get("decision") == "APPROVE_REPLAN" \
        and e.payload.get("applied")


def check_bounds(events: list[Event], state: ProblemState, config: Config) -> list[str]:
    out = []
    bound = config.challenge_bound
    for e in events:
        if e.kind in (EventKind.CHALLENGE_ROUND, EventKind.STALEMATE):
            rounds = e.payload.get("round", e.payload.get("rounds"))
            if rounds > bound:
                out.append(f"challenge round {rounds} > {bound} at step {e.payload['step']}")
        if e.kind is EventKind.SOLUTION_REJECTED and e.payload.get("via") == "solution":
            if e.payload["retries_used"] > config.max_solution_retries:
                out.append(f"solution retries {e.payload['retries_used']} > {config.max_solution_retries}")
        if e.kind is EventKind.DISPATCH:
            limit = _budget(config, e.payload["role"]) + config.grace_seconds
            if e.payload["wall"] > limit + 1e-9:
                out.append(f"dispatch wall {e.payload['wall']} > {limit} ({e.payload['role']})")
    for s in state.steps:
        if s.challenge_rounds > bound:
            out.append(f"final step {s.number} has {s.challenge_rounds} challenge rounds")
    replans = sum(_is_replan(e) for e in events)
    if replans > config.max_replans or state.replan_count > config.max_replans:
        out.append(f"{replans} re-plans > {config.max_replans}")
    if state.solution_retries_used > config.max_solution_retries:
        out.append(f"solution_retries_used {state.solution_retries_used}")
    explores = 0
    for e in events:
        if _is_replan(e):
            explores = 0
        elif e.kind is EventKind.DISPATCH and e.payload["task"] == "EXPLORE":
            explores += 1
            if explores > config.max_exploration_rounds:
                out.append(f"exploration round {explores} > {config.max_exploration_rounds}")
    return out


def check_sessions(events: list[Event], state: ProblemState) -> list[str]:
    """Session naming and Fresh/Resume policy, derived from the log alone."""
    out = []
    pid = state.problem_id
    meta = f"meta-{pid}"
    meta_fresh = 0
    attempts = 1
    current_reasoner = None
    spawned: set[str] = set()
    verifier_seen: dict[str, int] = {}
    current_verifier = None
    verifier_re = re.compile(rf"verify-{re.escape(pid)}-step(\d{{2,}})(?:-r(\d+))?")
    for e in events:
        p = e.payload
        if e.kind is EventKind.TRACE_BACK or _is_replan(e):
            attempts += 1
            continue
        if e.kind is not EventKind.DISPATCH:
            continue
        role, name, mode = p["role"], p["session"], p["mode"]
        if role == AgentRole.META.value:
            if name != meta:
                out.append(f"meta session {name!r} != {meta!r}")
            meta_fresh += mode == "Fresh"
            if mode == "Fresh" and meta_fresh > 1:
                out.append("second Fresh meta session")
            if mode == "Resume" and meta_fresh == 0:
                out.append("meta resumed before any Fresh")
        elif role in REASONER_ROLES:
            want = f"reason-{pid}-a{attempts}"
            if name != want:
                out.append(f"reasoner session {name!r}, expected {want!r}")
            if mode == "Fresh":
                if name in spawned:
                    out.append(f"reasoner session {name!r} spawned twice")
                spawned.add(name)
                current_reasoner = name
            elif name != current_reasoner:
                out.append(f"reasoner resumed {name!r} before spawning it")
        else:
            m = verifier_re.fullmatch(name)
            if not m:
                out.append(f"bad verifier session name {name!r}")
                continue
            step = p["step"] or 0
            if int(m.group(1)) != step:
                out.append(f"verifier session {name!r} for step {step}")
            if p["task"] == "RE_REVIEW":
                if mode != "Resume" or name != current_verifier:
                    out.append(f"re-review used {mode} {name!r}, expected Resume {current_verifier!r}")
            else:
                if mode != "Fresh":
                    out.append(f"review {p['task']} resumed {name!r}")
                base = name[: m.start(2) - 2] if m.group(2) else name
                k = verifier_seen.get(base, 0)
                want = base + (f"-r{k}" if k else "")
                if name != want:
                    out.append(f"verifier session {name!r}, expected {want!r}")
                verifier_seen[base] = k + 1
                current_verifier = name
    if any(e.kind is EventKind.DISPATCH and e.payload["role"] == AgentRole.META.value for e in events):
        if meta_fresh != 1:
            out.append(f"{meta_fresh} Fresh meta sessions")
    return out


def check_traceability(events: list[Event]) -> list[str]:
    """Every trace-back, re-plan and abort follows a parsed token or a bound event."""
    out = []
    tokens = (EventKind.VERDICT_PARSED, EventKind.META_INTERVENTION, EventKind.REPLAN_DECIDED,
              EventKind.STALEMATE, EventKind.TIMEOUT, EventKind.SOLUTION_REJECTED)
    last: Event | None = None
    proposed = False
    for e in events:
        p = e.payload
        if e.kind is EventKind.TRACE_BACK:
            sources = {
                EventKind.VERDICT_PARSED: ("verdict", "TRACE_BACK"),
                EventKind.META_INTERVENTION: ("action", "TRACE_BACK"),
                EventKind.REPLAN_DECIDED: ("decision", "TRACE_BACK"),
            }
            key = sources.get(last.kind) if last is not None else None
            if key is None or last.payload.get(key[0]) != key[1] or last.payload.get("target") != p["to"]:
                out.append(f"TraceBack to {p['to']} without a matching parsed token")
        elif e.kind is EventKind.ABORTED:
            reason = p.get("reason", "")
            bounded = any(w in reason for w in ("exhausted", "rejected", "structurally invalid"))
            by_token = last is not None and (
                (last.kind is EventKind.REPLAN_DECIDED and last.payload.get("decision") in ("ABORT", "ESCALATION"))
                or (last.kind is EventKind.META_INTERVENTION and last.payload.get("action") == "ABORT")
            )
            if not (bounded or by_token):
                out.append(f"Aborted ({reason!r}) without a token or bound event")
        elif e.kind is EventKind.REPLAN_PROPOSED:
            proposed = True
        elif e.kind is EventKind.REPLAN_DECIDED:
            if not proposed:
                out.append("ReplanDecided without ReplanProposed")
            if p.get("decision") != "ESCALATION":
                proposed = False
        if e.kind in tokens:
            last = e
    return out


def check_progress_gating(events: list[Event], state: ProblemState) -> list[str]:
    """Each accepted step in the final plan has an ACCEPT verdict event."""
    out = []
    start = 0
    for i, e in enumerate(events):
        if e.kind is EventKind.PHASE_ENTER and e.payload["phase"] == "StepExecution":
            start = i
    accepted_events = {
        e.payload["step"] for e in events[start:]
        if e.kind is EventKind.VERDICT_PARSED and e.payload.get("verdict") == "ACCEPT"
    }
    for s in state.steps:
        if s.status is StepStatus.ACCEPTED and s.number not in accepted_events:
            out.append(f"step {s.number} accepted without an ACCEPT event")
    if state.outcome is Outcome.SOLVED:
        if not any(e.kind is EventKind.SOLUTION_ACCEPTED for e in events):
            out.append("Solved without SolutionAccepted")
        if not state.solution_path or not (Path(state.workspace) / state.solution_path).exists():
            out.append("Solved without a solution artifact")
    return out


def check_pure_latching(events: list[Event]) -> list[str]:
    out = []
    pure = False
    for e in events:
        if e.kind is EventKind.PURE_REASONING_ON:
            pure = True
        elif _is_replan(e):
            pure = False
        elif e.kind is EventKind.DISPATCH and e.payload["role"] in REASONER_ROLES:
            if pure and e.payload["role"] != AgentRole.REASONER_NON_CODING.value:
                out.append(f"{e.payload['role']} dispatched after pure reasoning was latched")
    return out


def check_all(state: ProblemState, config: Config) -> list[str]:
    events = events_of(state)
    return (
        check_bounds(events, state, config)
        + check_sessions(events, state)
        + check_traceability(events)
        + check_progress_gating(events, state)
        + check_pure_latching(events)
    )


@dataclass
class Recorder:
    """Backend wrapper that keeps every request it forwards, together with
    the number of failure records the state held at that moment."""

    inner: object
    state: ProblemState
    requests: list[tuple[AgentRequest, int]] = field(default_factory=list)

    def call(self, request: AgentRequest, clock) -> AgentResponse:
        self.requests.append((request, len(self.state.failed_records)))
        return self.inner.call(request, clock)


def check_forbidden_injection(requests: list[tuple[AgentRequest, int]], state: ProblemState) -> list[str]:
    """Every Reasoner request carries every forbidden direction recorded so far."""
    out = []
    for i, (req, n_records) in enumerate(requests):
        if not req.role.is_reasoner:
            continue
        for rec in state.failed_records[:n_records]:
            for d in rec.forbidden_directions:
                if d not in req.injected_state:
                    out.append(f"request {i} lacks forbidden direction {d[:40]!r}")
    return out


@dataclass
class FuzzedBackend:
    """Corrupts a share of the inner backend's outputs before the
    orchestrator parses them: truncation, byte flips, random bytes or nothing."""

    inner: object
    rng: object
    rate: float = 0.15

    def call(self, request: AgentRequest, clock) -> AgentResponse:
        resp = self.inner.call(request, clock)
        if self.rng.random() >= self.rate:
            return resp
        text = resp.raw_output
        kind = self.rng.randrange(4)
        if kind == 0:
            text = text[: self.rng.randrange(len(text) + 1)]
        elif kind == 1 and text:
            chars = list(text)
            for _ in range(self.rng.randint(1, 6)):
                chars[self.rng.randrange(len(chars))] = chr(self.rng.randrange(32, 0x2FF))
            text = "".join(chars)
        elif kind == 2:
            text = bytes(self.rng.randrange(256) for _ in range(self.rng.randint(0, 200))).decode("latin-1")
        else:
            text = ""
        resp.raw_output = text
        return resp
