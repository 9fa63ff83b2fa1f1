"""Problem identifiers and deterministic agent session names."""

from __future__ import annotations

import re

from .errors import UnsafeIdentifierError
from .types import AgentRole

_SAFE_ID = re.compile(r"[A-Za-z0-9_-]+")


def validate_problem_id(problem_id: str) -> str:
    # Ids are embedded in directory paths and session names.
    if not isinstance(problem_id, str) or not _SAFE_ID.fullmatch(problem_id):
        raise UnsafeIdentifierError(f"unsafe problem identifier: {problem_id!r}")
    return problem_id


def session_name(
    role: AgentRole,
    problem_id: str,
    attempt: int | None = None,
    step: int | None = None,
    recreation: int = 0,
) -> str:
    """Return the session name for ``role``.

    Reasoner sessions are keyed by attempt index, Verifier sessions by the
    zero-padded step number (0 for whole-solution reviews), and the Meta
    session by the problem alone. ``recreation`` > 0 appends ``-r{k}`` so a
    step that is reviewed again after a trace-back gets a new, unique
    Verifier session instead of resuming the archived one.
    """
    validate_problem_id(problem_id)
    if role.is_reasoner:
        if attempt is None or attempt < 1:
            raise ValueError("Reasoner sessions need an attempt index >= 1")
        return f"reason-{problem_id}-a{attempt}"
    if role is AgentRole.VERIFIER:
        if step is None or step < 0:
            raise ValueError("Verifier sessions need a step number")
        base = f"verify-{problem_id}-step{step:02d}"
        return f"{base}-r{recreation}" if recreation else base
    return f"meta-{problem_id}"
