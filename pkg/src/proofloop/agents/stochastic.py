"""Seeded simulator that emits well-formed protocol documents at random.

It exists to exercise the control flow and statistics at scale; the text it
produces has no mathematical content.
"""

from __future__ import annotations

import dataclasses
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import yaml

from ..protocol import documents as doc
from ..protocol.instructions import Task
from ..types import AgentRole
from .base import AgentRequest, AgentResponse, Clock, simulated_duration


@dataclass
class BehaviorProfile:
    exploration_solved: float = 0.1
    step_challenge: float = 0.2
    challenge_resolves_per_round: float = 0.5
    verdict_trace_back: float = 0.2
    verdict_propose_replan: float = 0.1
    step_timeout: float = 0.05
    seed: int = 0
    # Decision points the core list leaves open; defaults keep runs short.
    exploration_partial: float = 0.3
    exploration_review_accept: float = 0.9
    exploration_continue: float = 0.5
    intervention_trace_back: float = 0.5
    intervention_pure_reasoning: float = 0.5
    replan_approve: float = 0.6
    replan_trace_back: float = 0.2
    solution_accept: float = 0.9
    plan_steps: tuple[int, int] = (3, 8)
    mean_seconds: dict[str, float] = dataclasses.field(
        default_factory=lambda: {"Reasoner": 600.0, "Verifier": 240.0, "MetaStrategist": 90.0}
    )

    def __post_init__(self):
        self.plan_steps = tuple(self.plan_steps)
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if f.type == "float" and not 0.0 <= v <= 1.0:
                raise ValueError(f"{f.name}={v} is not a probability")
        lo, hi = self.plan_steps
        if not 1 <= lo <= hi:
            raise ValueError("plan_steps must satisfy 1 <= lo <= hi")

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "BehaviorProfile":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown profile keys {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def load(cls, path: str | Path) -> "BehaviorProfile":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(yaml.safe_load(fh) or {})

    def to_dict(self) -> dict[str, Any]:
        d = dataclasses.asdict(self)
        d["plan_steps"] = list(self.plan_steps)
        return d


class StochasticBackend:
    """Draws each response from ``profile`` using a private generator."""

    def __init__(self, profile: BehaviorProfile, seed: int | None = None):
        self.profile = profile
        self.rng = random.Random(profile.seed if seed is None else seed)

    def _p(self, prob: float) -> bool:
        return self.rng.random() < prob

    def _duration(self, role: AgentRole, budget: float) -> float:
        key = "Reasoner" if role.is_reasoner else role.value
        mean = self.profile.mean_seconds.get(key, 60.0)
        return min(self.rng.expovariate(1.0 / mean), 0.95 * budget)

    def call(self, request: AgentRequest, clock: Clock) -> AgentResponse:
        p = self.profile
        task = Task(request.task)
        step = request.step or 0
        sleep = self._duration(request.role, request.budget_seconds)

        if task is Task.EXPLORE:
            if self._p(p.exploration_solved):
                text = doc.exploration_doc("SOLVED", "Complete argument found in exploration.")
            elif self._p(p.exploration_partial):
                text = doc.exploration_doc("PARTIALLY_SOLVED", "Candidate answer found; proof incomplete.")
            else:
                text = doc.exploration_doc("NEED_PLAN", "No shortcut found.")
        elif task is Task.EXPLORE_REVIEW:
            text = doc.verdict_doc("ACCEPT" if self._p(p.exploration_review_accept) else "CHALLENGE",
                                   objections=None)
        elif task is Task.EXPLORE_DECISION:
            text = doc.exploration_decision_doc(
                "CONTINUE_EXPLORATION" if self._p(p.exploration_continue) else "PROCEED_TO_PLAN"
            )
        elif task is Task.PRE_PLANNING:
            text = "## Hints\n- Try small cases first.\n"
        elif task is Task.PLAN:
            n = self.rng.randint(*p.plan_steps)
            text = doc.plan_doc([f"Simulated goal {i}" for i in range(1, n + 1)])
        elif task in (Task.STEP, Task.DEFEND):
            if self._p(p.step_timeout):
                sleep = request.budget_seconds * 1.5
                text = "Partial work: the case analysis is still open."
            else:
                text = doc.report_doc(
                    f"Simulated report for step {step}.",
                    verified=self.rng.randint(0, 3),
                    easy=self.rng.randint(0, 1),
                    hard=self.rng.randint(0, 3),
                )
        elif task is Task.REVIEW:
            text = self._review(step)
        elif task is Task.RE_REVIEW:
            if self._p(p.challenge_resolves_per_round):
                text = doc.verdict_doc("ACCEPT")
            else:
                text = doc.verdict_doc("CHALLENGE", objections="Objection still open.")
        elif task is Task.INTERVENTION:
            pure = self._p(p.intervention_pure_reasoning)
            if self._p(p.intervention_trace_back):
                text = doc.intervention_doc("TRACE_BACK", target=step, pure_reasoning=pure)
            else:
                text = doc.intervention_doc("RETRY_STEP", guidance="Narrow the case split.", pure_reasoning=pure)
        elif task is Task.REPLAN_DECISION:
            r = self.rng.random()
            if r < p.replan_approve:
                text = doc.replan_doc(
                    "APPROVE_REPLAN",
                    "Simulated structural failure.",
                    plan_summary="The abandoned plan.",
                    forbidden=[f"Do not repeat simulated direction {i}." for i in (1, 2, 3)],
                )
            elif r < p.replan_approve + p.replan_trace_back and step >= 1:
                text = doc.replan_doc("TRACE_BACK_TO", "Earlier step is suspect.", target=self.rng.randint(1, step))
            else:
                text = doc.replan_doc("CONTINUE", "Local issue; retry the step.")
        elif task is Task.SOLUTION:
            text = doc.solution_doc("Simulated consolidated solution.")
        else:  # SOLUTION_REVIEW, SOLUTION_META_REVIEW
            if self._p(p.solution_accept):
                text = doc.verdict_doc("ACCEPT")
            else:
                text = doc.verdict_doc("CHALLENGE", objections="Gap in the write-up.")

        wall, timed_out = simulated_duration(sleep, request.budget_seconds, request.grace_seconds)
        return AgentResponse(text, wall, timed_out, exit_status=124 if timed_out else 0)

    def _review(self, step: int) -> str:
        # Non-accept verdicts are only drawn once the Verifier objects at all,
        # so step_challenge = 0 means every step is accepted first time.
        p = self.profile
        if not self._p(p.step_challenge):
            return doc.verdict_doc("ACCEPT", entries=[("Lemma", f"Simulated fact from step {step}.")])
        r = self.rng.random()
        if r < p.verdict_trace_back:
            return doc.verdict_doc("TRACE_BACK", target=self.rng.randint(1, max(step, 1)))
        if r < p.verdict_trace_back + p.verdict_propose_replan:
            return doc.verdict_doc("PROPOSE_REPLAN")
        return doc.verdict_doc("CHALLENGE", objections="A case is missing.")
