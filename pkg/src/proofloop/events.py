"""Append-only run event log.

One line per event::

    <iso-time> <KIND> <payload-json>

Events are buffered by :class:`EventLog` and written when the owning state is
checkpointed, so the log never runs ahead of ``state.json``.
"""

from __future__ import annotations

import datetime as _dt
import enum
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

# Simulated clocks start here so timestamps are reproducible.
SIM_EPOCH = _dt.datetime(2025, 1, 1, tzinfo=_dt.timezone.utc)


class EventKind(str, enum.Enum):
    PHASE_ENTER = "PhaseEnter"
    DISPATCH = "Dispatch"
    VERDICT_PARSED = "VerdictParsed"
    CHALLENGE_ROUND = "ChallengeRound"
    STALEMATE = "Stalemate"
    TRACE_BACK = "TraceBack"
    REPLAN_PROPOSED = "ReplanProposed"
    REPLAN_DECIDED = "ReplanDecided"
    TIMEOUT = "Timeout"
    META_INTERVENTION = "MetaIntervention"
    PURE_REASONING_ON = "PureReasoningOn"
    SOLUTION_ACCEPTED = "SolutionAccepted"
    SOLUTION_REJECTED = "SolutionRejected"
    ABORTED = "Aborted"
    SOLVED = "Solved"


@dataclass(frozen=True)
class Event:
    timestamp: str
    kind: EventKind
    payload: dict[str, Any] = field(default_factory=dict)

    def to_line(self) -> str:
        body = json.dumps(self.payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
        return f"{self.timestamp} {self.kind.value} {body}"

    @classmethod
    def from_line(cls, line: str) -> "Event":
        stamp, kind, body = line.rstrip("\n").split(" ", 2)
        payload = json.loads(body)
        if not isinstance(payload, dict):
            raise ValueError("event payload must be an object")
        return cls(stamp, EventKind(kind), payload)

    def untimed(self) -> str:
        """The log line without its timestamp, for replay comparisons."""
        return self.to_line().split(" ", 1)[1]


def iso_time(seconds: float, *, simulated: bool) -> str:
    if simulated:
        moment = SIM_EPOCH + _dt.timedelta(seconds=seconds)
    else:
        moment = _dt.datetime.fromtimestamp(seconds, tz=_dt.timezone.utc)
    return moment.isoformat(timespec="milliseconds").replace("+00:00", "Z")


class EventLog:
    """Buffered writer for ``events.log``."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self.pending: list[Event] = []

    def emit(self, event: Event) -> Event:
        self.pending.append(event)
        return event

    def flush(self, durable: bool = True) -> int:
        """Append pending events durably; return how many were written."""
        if not self.pending:
            return 0
        text = "".join(e.to_line() + "\n" for e in self.pending)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(text)
            if durable:
                fh.flush()
                os.fsync(fh.fileno())
        n = len(self.pending)
        self.pending.clear()
        return n

    def truncate_to(self, committed: int) -> int:
        """Drop lines past the last committed checkpoint.

        Lines beyond ``committed`` were appended by a transition whose state
        write never landed; they describe work that will be redone on resume.
        Returns the number of lines removed.
        """
        if not self.path.exists():
            return 0
        lines = self.path.read_text(encoding="utf-8").splitlines(keepends=True)
        if len(lines) <= committed:
            return 0
        tmp = self.path.with_name(self.path.name + ".tmp")
        tmp.write_text("".join(lines[:committed]), encoding="utf-8")
        os.replace(tmp, self.path)
        return len(lines) - committed


def read_events(source: str | Path | Iterable[str]) -> tuple[list[Event], int]:
    """Parse an event log. Returns ``(events, n_corrupt_lines)``."""
    if isinstance(source, (str, Path)):
        path = Path(source)
        lines = path.read_text(encoding="utf-8").splitlines() if path.exists() else []
    else:
        lines = list(source)
    events, bad = [], 0
    for line in lines:
        if not line.strip():
            continue
        try:
            events.append(Event.from_line(line))
        except (ValueError, json.JSONDecodeError):
            bad += 1
    return events, bad
