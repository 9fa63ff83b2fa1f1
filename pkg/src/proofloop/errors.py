"""Exception hierarchy.

Protocol malformations are *values* (``Escalation``, ``StructuralError``) and
never appear here; these exceptions are for conditions that stop a run.
"""


class ProofloopError(Exception):
    """Base class for all package errors."""


class UnsafeIdentifierError(ProofloopError, ValueError):
    pass


class WorkspaceExistsError(ProofloopError):
    """A workspace for this problem id already holds a run."""


class WorkspaceLockedError(ProofloopError):
    pass


class ResumeImpossibleError(ProofloopError):
    """The machine-readable mirror is missing or unreadable."""


class InternalConsistencyError(ProofloopError):
    """The orchestrator asked for a transition its own state forbids."""


class EmptyDocumentError(ProofloopError, ValueError):
    pass


class BackendError(ProofloopError):
    """An agent backend could not be started or crashed outright."""


class ScriptDivergence(ProofloopError):
    """A scripted replay received a request it did not expect."""

    def __init__(self, message: str, *, index: int | None = None, field: str | None = None):
        super().__init__(message)
        self.index = index
        self.field = field


class SkillNotFoundError(ProofloopError, KeyError):
    pass
