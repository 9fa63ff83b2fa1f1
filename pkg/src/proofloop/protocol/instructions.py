"""Instruction envelopes sent to agents, rendered from ``data/tasks``."""

from __future__ import annotations

import enum
import functools
from importlib import resources
from string import Template


class Task(str, enum.Enum):
    EXPLORE = "EXPLORE"
    EXPLORE_REVIEW = "EXPLORE_REVIEW"
    EXPLORE_DECISION = "EXPLORE_DECISION"
    PRE_PLANNING = "PRE_PLANNING"
    PLAN = "PLAN"
    STEP = "STEP"
    REVIEW = "REVIEW"
    DEFEND = "DEFEND"
    RE_REVIEW = "RE_REVIEW"
    INTERVENTION = "INTERVENTION"
    REPLAN_DECISION = "REPLAN_DECISION"
    SOLUTION = "SOLUTION"
    SOLUTION_REVIEW = "SOLUTION_REVIEW"
    SOLUTION_META_REVIEW = "SOLUTION_META_REVIEW"


@functools.lru_cache(maxsize=None)
def _template(task: Task) -> Template:
    text = resources.files("proofloop.data").joinpath("tasks", f"{task.value}.md").read_text(encoding="utf-8")
    return Template(text)


def render_instruction(task: Task | str, **fields) -> str:
    """Fill a task template. Unknown placeholders are left verbatim."""
    task = Task(task)
    fields = {k: ("" if v is None else str(v)) for k, v in fields.items()}
    fields.setdefault("extra", "")
    fields.setdefault("document", "")
    body = _template(task).safe_substitute(fields).strip()
    return f"Task: {task.value}\n\n{body}\n"
