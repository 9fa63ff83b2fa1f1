"""Dispatch envelope, clocks, and the backend interface."""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass
from typing import Protocol

from ..stats import AgentInvocation, RunStats
from ..types import AgentRole, Phase


class SessionMode(str, enum.Enum):
    FRESH = "Fresh"
    RESUME = "Resume"


@dataclass(frozen=True)
class SessionDirective:
    mode: SessionMode
    name: str

    @classmethod
    def fresh(cls, name: str) -> "SessionDirective":
        return cls(SessionMode.FRESH, name)

    @classmethod
    def resume(cls, name: str) -> "SessionDirective":
        return cls(SessionMode.RESUME, name)


@dataclass
class AgentRequest:
    role: AgentRole
    session: SessionDirective
    injected_state: str
    instruction: str
    budget_seconds: float
    grace_seconds: float = 5.0
    # Routing hints for backends that need them (scripts, the simulator).
    task: str = ""
    step: int | None = None

    @property
    def prompt(self) -> str:
        """What the agent actually receives: live state first, then the task."""
        return f"{self.injected_state}\n{self.instruction}"


@dataclass
class AgentResponse:
    raw_output: str
    wall_seconds: float
    timed_out: bool = False
    exit_status: int = 0


class Backend(Protocol):
    def call(self, request: AgentRequest, clock: "Clock") -> AgentResponse: ...


class Clock(Protocol):
    simulated: bool

    def now(self) -> float: ...

    def advance(self, seconds: float) -> None: ...


class SimulatedClock:
    """Time moves only when a dispatch reports its duration."""

    simulated = True

    def __init__(self, start: float = 0.0):
        self._now = float(start)

    def now(self) -> float:
        return self._now

    def advance(self, seconds: float) -> None:
        self._now += max(0.0, seconds)


class RealClock:
    simulated = False

    def now(self) -> float:
        return time.time()

    def advance(self, seconds: float) -> None:
        pass


def simulated_duration(sleep: float, budget: float, grace: float, ignores_stop: bool = False) -> tuple[float, bool]:
    """Wall time and timeout flag for work that would take ``sleep`` seconds.

    A stopped agent returns at the budget; one that ignores the stop signal is
    killed when the grace period ends.
    """
    if sleep <= budget:
        return sleep, False
    return (budget + grace if ignores_stop else budget), True


def dispatch(
    backend: Backend,
    request: AgentRequest,
    clock: Clock,
    stats: RunStats | None = None,
    phase: Phase = Phase.SETUP,
) -> AgentResponse:
    """Blocking call through ``backend``; records one invocation in ``stats``."""
    response = backend.call(request, clock)
    limit = request.budget_seconds + request.grace_seconds
    if response.wall_seconds > limit:
        # The watchdog would have killed it by now.
        response.wall_seconds = limit
        response.timed_out = True
    clock.advance(response.wall_seconds)
    if stats is not None:
        stats.record(
            AgentInvocation(
                role=request.role,
                wall_seconds=response.wall_seconds,
                timed_out=response.timed_out,
                phase=phase,
                step=request.step,
                session=request.session.name,
            )
        )
    return response
