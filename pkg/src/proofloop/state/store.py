"""Workspace layout, crash-safe persistence, and the single-writer lock."""

from __future__ import annotations

import json
import logging
import os
import time
from pathlib import Path

from ..errors import ResumeImpossibleError, WorkspaceLockedError
from ..events import EventLog
from .model import ProblemState
from .render import render_canonical

log = logging.getLogger(__name__)


class Workspace:
    """Paths under ``scratch/<id>/``."""

    def __init__(self, path: str | Path):
        self.path = Path(path)

    @classmethod
    def for_problem(cls, workdir: str | Path, problem_id: str) -> "Workspace":
        return cls(Path(workdir) / "scratch" / problem_id)

    def __truediv__(self, name: str) -> Path:
        return self.path / name

    @property
    def state_json(self) -> Path:
        return self.path / "state.json"

    @property
    def canonical(self) -> Path:
        return self.path / "PROBLEM_STATE.md"

    @property
    def events_log(self) -> Path:
        return self.path / "events.log"

    @property
    def problem_md(self) -> Path:
        return self.path / "problem.md"

    @property
    def plan_md(self) -> Path:
        return self.path / "plan.md"

    @property
    def exploration_md(self) -> Path:
        return self.path / "exploration.md"

    @property
    def solution_md(self) -> Path:
        return self.path / "solution.md"

    @property
    def code_dir(self) -> Path:
        return self.path / "code"

    @property
    def stats_json(self) -> Path:
        return self.path / "stats.json"

    def step_report(self, n: int) -> Path:
        return self.path / f"step-{n:02d}-report.md"

    def step_debate(self, n: int) -> Path:
        return self.path / f"step-{n:02d}-debate.md"

    def archive_dir(self, plan_version: int) -> Path:
        return self.path / "archive" / f"plan-v{plan_version}"

    def exists(self) -> bool:
        return self.state_json.exists()

    def rel(self, p: Path) -> str:
        return str(Path(p).relative_to(self.path))


def _replace(src: Path, dst: Path) -> None:
    # Indirection point for fault-injection tests.
    os.replace(src, dst)


def atomic_write(path: Path, text: str, durable: bool = True) -> None:
    """Write via temp file + rename so readers never see a torn file.

    ``durable=False`` skips the fsyncs; the rename is still atomic, which is
    enough for simulations that never survive a power loss.
    """
    path = Path(path)
    tmp = path.with_name(f".{path.name}.tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
        if durable:
            fh.flush()
            os.fsync(fh.fileno())
    _replace(tmp, path)
    if not durable:
        return
    try:
        dfd = os.open(path.parent, os.O_RDONLY)
    except OSError:
        return
    try:
        os.fsync(dfd)
    except OSError:
        pass
    finally:
        os.close(dfd)


def persist(state: ProblemState, events: EventLog | None = None, durable: bool = True) -> None:
    """Checkpoint: flush pending events, then the mirror, then the canonical doc.

    The mirror records how many event lines it covers, so a crash between the
    event append and the mirror rename is repaired on load.
    """
    if state.workspace is None:
        raise ValueError("state has no workspace to persist into")
    ws = Workspace(state.workspace)
    if events is not None:
        state.events_committed += events.flush(durable)
    atomic_write(ws.state_json, json.dumps(state.to_dict(), indent=1, ensure_ascii=False) + "\n", durable)
    atomic_write(ws.canonical, render_canonical(state), durable)


def _read_mirror(path: Path) -> dict:
    return json.loads(path.read_text(encoding="utf-8"))


def load(workspace: str | Path, *, repair: bool = True) -> ProblemState:
    """Load a workspace. The mirror is authoritative; the canonical layer is
    regenerated if absent or out of date.

    ``repair=False`` gives a read-only load for inspection tools.
    """
    ws = Workspace(workspace)
    try:
        try:
            data = _read_mirror(ws.state_json)
        except (json.JSONDecodeError, FileNotFoundError):
            # A concurrent writer may be mid-rename; retry once.
            time.sleep(0.05)
            data = _read_mirror(ws.state_json)
        state = ProblemState.from_dict(data)
    except FileNotFoundError as exc:
        raise ResumeImpossibleError(f"no state mirror at {ws.state_json}") from exc
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ResumeImpossibleError(f"corrupt state mirror at {ws.state_json}: {exc}") from exc
    state.workspace = ws.path
    if not repair:
        return state

    expected = render_canonical(state)
    current = ws.canonical.read_text(encoding="utf-8") if ws.canonical.exists() else None
    if current != expected:
        log.warning(
            "%s %s; regenerating from state.json",
            ws.canonical,
            "missing" if current is None else "disagrees with the mirror",
        )
        atomic_write(ws.canonical, expected)
    dropped = EventLog(ws.events_log).truncate_to(state.events_committed)
    if dropped:
        log.warning("dropped %d uncommitted event line(s) from %s", dropped, ws.events_log)
    return state


def _pid_alive(pid: int) -> bool:
    try:
        os.kill(pid, 0)
    except ProcessLookupError:
        return False
    except PermissionError:
        return True
    return True


class WorkspaceLock:
    """Exclusive lock file; one orchestrator per workspace."""

    def __init__(self, workspace: str | Path):
        self.path = Path(workspace) / ".lock"
        self.held = False

    def acquire(self) -> None:
        for _ in range(2):
            try:
                fd = os.open(self.path, os.O_CREAT | os.O_EXCL | os.O_WRONLY, 0o644)
            except FileExistsError:
                try:
                    pid = int(self.path.read_text().strip() or "0")
                except (OSError, ValueError):
                    pid = 0
                if pid and _pid_alive(pid):
                    raise WorkspaceLockedError(f"{self.path.parent} is locked by pid {pid}")
                log.warning("removing stale lock %s (pid %s)", self.path, pid)
                self.path.unlink(missing_ok=True)
                continue
            with os.fdopen(fd, "w") as fh:
                fh.write(str(os.getpid()))
            self.held = True
            return
        raise WorkspaceLockedError(f"could not lock {self.path.parent}")

    def release(self) -> None:
        if self.held:
            self.path.unlink(missing_ok=True)
            self.held = False

    def __enter__(self) -> "WorkspaceLock":
        self.acquire()
        return self

    def __exit__(self, *exc) -> None:
        self.release()
