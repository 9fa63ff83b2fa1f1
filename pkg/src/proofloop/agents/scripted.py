"""Deterministic replay backend driven by a hand-authored script."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from ..errors import ScriptDivergence
from .base import AgentRequest, AgentResponse, Clock, simulated_duration

_EXPECT_KEYS = ("role", "session_mode", "session_name", "task", "step", "instruction_contains")


@dataclass
class ScriptEntry:
    expect: dict[str, Any]
    respond: str
    sleep_seconds: float = 0.0
    ignores_stop: bool = False
    note: str = ""

    def __post_init__(self):
        unknown = set(self.expect) - set(_EXPECT_KEYS)
        if unknown:
            raise ValueError(f"unknown expectation keys {sorted(unknown)}")
        if "role" not in self.expect or "session_mode" not in self.expect:
            raise ValueError("every entry must expect a role and a session mode")

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"expect": dict(self.expect), "respond": self.respond}
        if self.sleep_seconds:
            d["sleep_seconds"] = self.sleep_seconds
        if self.ignores_stop:
            d["ignores_stop"] = True
        if self.note:
            d["note"] = self.note
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ScriptEntry":
        return cls(
            expect=dict(d["expect"]),
            respond=str(d.get("respond", "")),
            sleep_seconds=float(d.get("sleep_seconds", 0.0)),
            ignores_stop=bool(d.get("ignores_stop", False)),
            note=str(d.get("note", "")),
        )


@dataclass
class Script:
    """A replay script plus the problem it was written for."""

    problem_id: str
    statement: str
    entries: list[ScriptEntry]
    config: dict[str, Any] = field(default_factory=dict)
    expected: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "problem_id": self.problem_id,
            "statement": self.statement,
            "config": dict(self.config),
            "expected": dict(self.expected),
            "entries": [e.to_dict() for e in self.entries],
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Script":
        return cls(
            problem_id=d["problem_id"],
            statement=d.get("statement", ""),
            entries=[ScriptEntry.from_dict(e) for e in d.get("entries", [])],
            config=dict(d.get("config") or {}),
            expected=dict(d.get("expected") or {}),
        )

    @classmethod
    def load(cls, path: str | Path) -> "Script":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(yaml.safe_load(fh))

    def dump(self, path: str | Path) -> None:
        Path(path).write_text(
            yaml.safe_dump(self.to_dict(), sort_keys=False, allow_unicode=True, width=100),
            encoding="utf-8",
        )


def _actual(request: AgentRequest, key: str):
    if key == "role":
        return request.role.value
    if key == "session_mode":
        return request.session.mode.value
    if key == "session_name":
        return request.session.name
    if key == "task":
        return request.task
    if key == "step":
        return request.step
    raise KeyError(key)


class ScriptedBackend:
    """Replays ``entries`` in order, checking each request against its entry."""

    def __init__(self, entries: list[ScriptEntry] | Script, start: int = 0):
        if isinstance(entries, Script):
            entries = entries.entries
        self.entries = list(entries)
        self.cursor = start
        self.injected: list[tuple[int, str]] = []

    @classmethod
    def from_file(cls, path: str | Path, start: int = 0) -> "ScriptedBackend":
        return cls(Script.load(path), start=start)

    @property
    def remaining(self) -> int:
        return len(self.entries) - self.cursor

    def check(self, request: AgentRequest) -> ScriptEntry:
        i = self.cursor
        if i >= len(self.entries):
            raise ScriptDivergence(
                f"script exhausted after {len(self.entries)} entries; got {request.role.value} "
                f"{request.task or ''}".rstrip(),
                index=i,
                field="Exhausted",
            )
        entry = self.entries[i]
        for key in _EXPECT_KEYS:
            if key not in entry.expect:
                continue
            want = entry.expect[key]
            if key == "instruction_contains":
                if str(want) not in request.instruction:
                    raise ScriptDivergence(
                        f"entry {i}: instruction does not contain {want!r}", index=i, field=key
                    )
                continue
            got = _actual(request, key)
            if got != want:
                raise ScriptDivergence(
                    f"entry {i}: expected {key}={want!r}, got {got!r}", index=i, field=key
                )
        return entry

    def call(self, request: AgentRequest, clock: Clock) -> AgentResponse:
        entry = self.check(request)
        self.injected.append((self.cursor, request.injected_state))
        self.cursor += 1
        wall, timed_out = simulated_duration(
            entry.sleep_seconds, request.budget_seconds, request.grace_seconds, entry.ignores_stop
        )
        return AgentResponse(entry.respond, wall, timed_out, exit_status=124 if timed_out else 0)


class ScriptBuilder:
    """Small helper for authoring scripts in Python before freezing to YAML."""

    def __init__(self, problem_id: str, statement: str):
        self.problem_id = problem_id
        self.statement = statement
        self.entries: list[ScriptEntry] = []

    def add(
        self,
        role: str,
        mode: str,
        respond: str,
        *,
        task: str | None = None,
        session: str | None = None,
        step: int | None = None,
        contains: str | None = None,
        sleep: float = 0.0,
        ignores_stop: bool = False,
        note: str = "",
    ) -> "ScriptBuilder":
        expect: dict[str, Any] = {"role": role, "session_mode": mode}
        if session is not None:
            expect["session_name"] = session
        if task is not None:
            expect["task"] = task
        if step is not None:
            expect["step"] = step
        if contains is not None:
            expect["instruction_contains"] = contains
        self.entries.append(ScriptEntry(expect, respond, sleep, ignores_stop, note))
        return self

    def build(self, config: dict | None = None, expected: dict | None = None) -> Script:
        return Script(self.problem_id, self.statement, list(self.entries), config or {}, expected or {})
