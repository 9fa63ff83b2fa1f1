"""Reasoning-free orchestration of Reasoner, Verifier and Meta-Strategist agents."""

from .config import Budgets, Config, load_config
from .orchestrator import Orchestrator, RunOutcome, resume_problem, run_problem
from .state import ProblemState, load, new_problem_state, persist
from .stats import RunStats, aggregate, summarize_run, tag_distribution
from .types import AgentRole, Outcome, Phase

__all__ = [
    "AgentRole",
    "Budgets",
    "Config",
    "Orchestrator",
    "Outcome",
    "Phase",
    "ProblemState",
    "RunOutcome",
    "RunStats",
    "aggregate",
    "load",
    "load_config",
    "new_problem_state",
    "persist",
    "resume_problem",
    "run_problem",
    "summarize_run",
    "tag_distribution",
]
