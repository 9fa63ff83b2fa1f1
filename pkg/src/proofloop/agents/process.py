"""Backend that runs an external agent CLI as a subprocess.

The command comes from a YAML template::

    command: ["copilot", "{session_flag}", "{session}", "--agent", "{agent}",
              "--prompt-file", "{prompt_file}"]
    fresh_flag: "--name"
    resume_flag: "--resume"

The prompt (live state followed by the instruction) is written to a file and
the agent's standard output is taken as its response.
"""

from __future__ import annotations

import os
import signal
import subprocess
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from ..errors import BackendError
from .base import AgentRequest, AgentResponse, Clock, SessionMode


@dataclass
class CommandTemplate:
    command: list[str]
    fresh_flag: str = "--name"
    resume_flag: str = "--resume"
    cwd: str | None = None
    env: dict[str, str] = field(default_factory=dict)

    @classmethod
    def load(cls, path: str | Path) -> "CommandTemplate":
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh) or {}
        if not data.get("command"):
            raise ValueError(f"{path}: template needs a non-empty 'command' list")
        return cls(**data)

    def argv(self, request: AgentRequest, prompt_file: str) -> list[str]:
        values = {
            "session_flag": self.fresh_flag if request.session.mode is SessionMode.FRESH else self.resume_flag,
            "session": request.session.name,
            "agent": request.role.agent_file,
            "role": request.role.value,
            "prompt_file": prompt_file,
        }
        return [part.format(**values) for part in self.command]


def _signal_group(proc: subprocess.Popen, sig: int) -> None:
    try:
        os.killpg(proc.pid, sig)
    except (ProcessLookupError, PermissionError):
        pass


class ProcessBackend:
    def __init__(self, template: CommandTemplate, workdir: str | Path | None = None):
        self.template = template
        self.workdir = Path(workdir) if workdir else None

    def call(self, request: AgentRequest, clock: Clock) -> AgentResponse:
        with tempfile.TemporaryDirectory(prefix="proofloop-") as tmp:
            prompt_file = Path(tmp) / "prompt.md"
            prompt_file.write_text(request.prompt, encoding="utf-8")
            out_path = Path(tmp) / "stdout.txt"
            argv = self.template.argv(request, str(prompt_file))
            env = {**os.environ, **self.template.env}
            cwd = self.template.cwd or (str(self.workdir) if self.workdir else None)
            start = time.monotonic()
            with open(out_path, "wb") as out:
                try:
                    proc = subprocess.Popen(
                        argv, stdout=out, stderr=subprocess.DEVNULL, stdin=subprocess.DEVNULL,
                        cwd=cwd, env=env, start_new_session=True,
                    )
                except OSError as exc:
                    raise BackendError(f"could not start {argv[0]!r}: {exc}") from exc
                timed_out = False
                try:
                    status = proc.wait(timeout=request.budget_seconds)
                except subprocess.TimeoutExpired:
                    timed_out = True
                    _signal_group(proc, signal.SIGTERM)
                    try:
                        status = proc.wait(timeout=request.grace_seconds)
                    except subprocess.TimeoutExpired:
                        _signal_group(proc, signal.SIGKILL)
                        status = proc.wait()
            wall = time.monotonic() - start
            output = out_path.read_bytes().decode("utf-8", errors="replace")
        return AgentResponse(output, wall, timed_out, status)
