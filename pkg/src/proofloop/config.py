"""Run configuration: per-call budgets and loop bounds."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from .types import AgentRole


# First line of every injected state block. Deployments whose agent prompts
# look for a different literal can override it in the config file.
LIVE_STATE_BANNER = "[proofloop live problem state]"


@dataclass
class Budgets:
    """Per-call wall-clock limits in seconds."""

    reasoner: float = 1800
    verifier: float = 1200
    meta: float = 600
    code_exec: float = 600

    def for_role(self, role: AgentRole) -> float:
        if role.is_reasoner:
            return self.reasoner
        if role is AgentRole.VERIFIER:
            return self.verifier
        return self.meta


@dataclass
class Config:
    budgets: Budgets = field(default_factory=Budgets)
    max_challenge_rounds: int = 5
    max_replans: int = 3
    max_exploration_rounds: int = 2
    max_solution_retries: int = 2
    stalemate_round_budget: int = 5
    recommended_steps: tuple[int, int] = (6, 10)
    max_total_steps: int = 20
    re_explore_after_replan: bool = True
    meta_whole_solution_review: bool = False
    pre_planning_analysis: bool = True
    # Not in the published budget table; see README "Extra knobs".
    chronic_timeout_threshold: int = 3
    grace_seconds: float = 5.0
    simulated_clock: bool = False
    max_dispatches: int = 500
    fsync: bool = True
    live_state_banner: str = LIVE_STATE_BANNER

    def __post_init__(self):
        if isinstance(self.budgets, dict):
            self.budgets = Budgets(**self.budgets)
        self.recommended_steps = tuple(self.recommended_steps)
        for name in (
            "max_challenge_rounds",
            "max_replans",
            "max_exploration_rounds",
            "max_solution_retries",
            "stalemate_round_budget",
            "max_total_steps",
            "chronic_timeout_threshold",
        ):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if not 1 <= self.max_total_steps:
            raise ValueError("max_total_steps must be at least 1")

    @property
    def challenge_bound(self) -> int:
        """The one bound actually enforced on debate rounds."""
        return min(self.max_challenge_rounds, self.stalemate_round_budget)

    def to_dict(self) -> dict[str, Any]:
        d = dataclasses.asdict(self)
        d["recommended_steps"] = list(self.recommended_steps)
        return d

    @classmethod
    def from_dict(cls, data: dict[str, Any] | None) -> "Config":
        data = dict(data or {})
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        budgets = data.pop("budgets", None) or {}
        bad = set(budgets) - {f.name for f in dataclasses.fields(Budgets)}
        if bad:
            raise ValueError(f"unknown budget keys: {sorted(bad)}")
        return cls(budgets=Budgets(**budgets), **data)

    def replace(self, **changes) -> "Config":
        return dataclasses.replace(self, **changes)


def load_config(path: str | Path | None) -> Config:
    if path is None:
        return Config()
    with open(path, encoding="utf-8") as fh:
        return Config.from_dict(yaml.safe_load(fh) or {})
