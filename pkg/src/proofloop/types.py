"""Enumerations and small value types shared by every layer."""

from __future__ import annotations

import enum
from dataclasses import dataclass


class Phase(str, enum.Enum):
    SETUP = "Setup"
    EXPLORATION = "Exploration"
    PLANNING = "Planning"
    STEP_EXECUTION = "StepExecution"
    SOLUTION_GENERATION = "SolutionGeneration"
    DONE = "Done"


# Legal phase edges. Planning -> Exploration is not listed: re-exploration is
# entered from StepExecution when a re-plan is approved.
PHASE_EDGES: dict[Phase, frozenset[Phase]] = {
    Phase.SETUP: frozenset({Phase.EXPLORATION, Phase.DONE}),
    Phase.EXPLORATION: frozenset({Phase.PLANNING, Phase.DONE}),
    Phase.PLANNING: frozenset({Phase.STEP_EXECUTION, Phase.DONE}),
    Phase.STEP_EXECUTION: frozenset(
        {Phase.SOLUTION_GENERATION, Phase.EXPLORATION, Phase.PLANNING, Phase.DONE}
    ),
    Phase.SOLUTION_GENERATION: frozenset({Phase.DONE}),
    Phase.DONE: frozenset(),
}


class StepStatus(str, enum.Enum):
    PENDING = "Pending"
    EXECUTING = "Executing"
    UNDER_REVIEW = "UnderReview"
    IN_CHALLENGE = "InChallenge"
    ACCEPTED = "Accepted"
    ARCHIVED = "Archived"


class Category(str, enum.Enum):
    LEMMA = "Lemma"
    CONJECTURE = "Conjecture"
    COMPUTATION = "Computation"
    DEFINITION = "Definition"
    ANSWER = "Answer"


class Outcome(str, enum.Enum):
    IN_PROGRESS = "InProgress"
    SOLVED = "Solved"
    ABORTED = "Aborted"


class AgentRole(str, enum.Enum):
    REASONER = "Reasoner"
    REASONER_NON_CODING = "ReasonerNonCoding"
    VERIFIER = "Verifier"
    META = "MetaStrategist"

    @property
    def is_reasoner(self) -> bool:
        return self in (AgentRole.REASONER, AgentRole.REASONER_NON_CODING)

    @property
    def agent_file(self) -> str:
        """Name of the role definition shipped under ``data/agents``."""
        return _AGENT_FILES[self]


_AGENT_FILES = {
    AgentRole.REASONER: "reason",
    AgentRole.REASONER_NON_CODING: "reason-noncoding",
    AgentRole.VERIFIER: "verify",
    AgentRole.META: "meta-prompt",
}


@dataclass(frozen=True)
class TagTally:
    """Counts of the three verification tags in a report."""

    verified: int = 0
    easy_verify: int = 0
    hard_verify: int = 0

    def __post_init__(self):
        if min(self.verified, self.easy_verify, self.hard_verify) < 0:
            raise ValueError("tag counts must be non-negative")

    def __add__(self, other: "TagTally") -> "TagTally":
        return TagTally(
            self.verified + other.verified,
            self.easy_verify + other.easy_verify,
            self.hard_verify + other.hard_verify,
        )

    @property
    def total(self) -> int:
        return self.verified + self.easy_verify + self.hard_verify

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.verified, self.easy_verify, self.hard_verify)
