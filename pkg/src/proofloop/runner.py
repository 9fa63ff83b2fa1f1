"""Higher-level entry points shared by the CLI, tests and demos."""

from __future__ import annotations

import json
import shutil
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Callable

from .agents import BehaviorProfile, CommandTemplate, ProcessBackend, Script, ScriptedBackend, StochasticBackend
from .config import Config
from .orchestrator import RunOutcome, run_problem
from .state import ProblemState, Workspace, atomic_write, load, new_problem_state
from .stats import RunStats, summarize_run
from .types import StepStatus


def make_backend(spec: str, state: ProblemState | None = None):
    """Build a backend from ``scripted:<path>``, ``stochastic:<path>`` or
    ``process:<template>``. A scripted backend resumes at the first entry
    the state has not consumed yet."""
    kind, sep, arg = spec.partition(":")
    if not sep or not arg:
        raise ValueError(f"backend spec {spec!r} is not <kind>:<path>")
    if kind == "scripted":
        start = len(state.stats.invocations) if state is not None else 0
        return ScriptedBackend.from_file(arg, start=start)
    if kind == "stochastic":
        if state is not None and state.stats.invocations:
            raise ValueError("a stochastic run cannot be resumed mid-trajectory")
        return StochasticBackend(BehaviorProfile.load(arg))
    if kind == "process":
        return ProcessBackend(CommandTemplate.load(arg))
    raise ValueError(f"unknown backend kind {kind!r}")


def fresh_workspace(workdir: str | Path, problem_id: str, overwrite: bool) -> None:
    ws = Workspace.for_problem(workdir, problem_id)
    if overwrite and ws.path.exists():
        shutil.rmtree(ws.path)


def start(problem_id: str, statement: str, config: Config, workdir: str | Path,
          backend_spec: str = "", overwrite: bool = False) -> ProblemState:
    fresh_workspace(workdir, problem_id, overwrite)
    state = new_problem_state(problem_id, statement, config, workdir)
    if backend_spec:
        atomic_write(Workspace(state.workspace) / "run.json", json.dumps({"backend": backend_spec}) + "\n")
    return state


def workspace_config(workspace: str | Path) -> Config:
    path = Workspace(workspace) / "config.json"
    return Config.from_dict(json.loads(path.read_text())) if path.exists() else Config()


def replay(
    script: Script | str | Path,
    workdir: str | Path,
    *,
    overwrite: bool = False,
    config: Config | None = None,
    on_checkpoint: Callable[[ProblemState, int], None] | None = None,
) -> tuple[RunOutcome, ScriptedBackend]:
    """Run a script end to end under the simulated clock."""
    if not isinstance(script, Script):
        script = Script.load(script)
    config = config or Config.from_dict(script.config)
    config = config.replace(simulated_clock=True)
    state = start(script.problem_id, script.statement, config, workdir, overwrite=overwrite)
    backend = ScriptedBackend(script)
    return run_problem(config, backend, state, on_checkpoint=on_checkpoint), backend


def resume_replay(
    script: Script,
    workspace: str | Path,
    on_checkpoint: Callable[[ProblemState, int], None] | None = None,
) -> tuple[RunOutcome, ScriptedBackend]:
    state = load(workspace)
    backend = ScriptedBackend(script, start=len(state.stats.invocations))
    return run_problem(workspace_config(workspace), backend, state, on_checkpoint=on_checkpoint), backend


def observed(state: ProblemState) -> dict[str, Any]:
    """The quantities a replay's ``expected`` block may pin down."""
    return {
        "outcome": state.outcome.value,
        "plan_version": state.plan_version,
        "trace_backs": state.stats.trace_backs,
        "replans": state.replan_count,
        "failed_records": len(state.failed_records),
        "accepted_steps": sum(1 for st in state.steps if st.status is StepStatus.ACCEPTED),
        "pure_reasoning_used": any(
            i.role.value == "ReasonerNonCoding" for i in state.stats.invocations
        ),
        "solved_in_exploration": state.stats.solved_in_exploration,
    }


def mismatches(state: ProblemState, expected: dict[str, Any]) -> list[str]:
    got = observed(state)
    out = []
    for key, want in expected.items():
        if key not in got:
            out.append(f"unknown expectation {key!r}")
        elif got[key] != want:
            out.append(f"{key}: expected {want!r}, got {got[key]!r}")
    return out


def summary_line(state: ProblemState) -> str:
    def plural(n: int, word: str) -> str:
        return f"{n} {word}" + ("" if n == 1 else "s")

    return (
        f"{state.outcome.value}, plan v{state.plan_version}, "
        f"{plural(state.stats.trace_backs, 'trace-back')}, {plural(state.replan_count, 're-plan')}"
    )


def _simulate_one(args: tuple) -> dict:
    profile_dict, seed, problem_id, workdir, config_dict = args
    profile = BehaviorProfile.from_dict(profile_dict)
    config = Config.from_dict(config_dict)
    state = start(problem_id, f"Simulated problem {problem_id}.", config, workdir, overwrite=True)
    run_problem(config, StochasticBackend(profile, seed=seed), state)
    return summarize_run(Workspace(state.workspace).events_log, state).to_dict()


def simulate(
    profile: BehaviorProfile,
    n_runs: int,
    seed: int,
    workdir: str | Path,
    config: Config | None = None,
    workers: int = 1,
    problems: int | None = None,
) -> list[RunStats]:
    """Run ``n_runs`` seeded trajectories in disjoint workspaces.

    Runs are spread round-robin over ``problems`` problem ids (default: one
    id per run), so per-problem wall-clock columns have something to average.
    """
    config = (config or Config()).replace(simulated_clock=True, fsync=False)
    problems = problems or n_runs
    jobs = []
    for i in range(n_runs):
        pid = f"sim{i % problems:04d}-r{i // problems:03d}"
        jobs.append((profile.to_dict(), seed * 1_000_003 + i, pid, str(workdir), config.to_dict()))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            dicts = list(pool.map(_simulate_one, jobs))
    else:
        dicts = [_simulate_one(j) for j in jobs]
    runs = [RunStats.from_dict(d) for d in dicts]
    for r, (_, _, pid, _, _) in zip(runs, jobs):
        r.problem_id = pid.split("-r")[0]
    return runs


def collect_workspaces(paths: list[str | Path]) -> list[RunStats]:
    out = []
    for p in paths:
        p = Path(p)
        if not (p / "state.json").exists():
            continue
        state = load(p, repair=False)
        out.append(summarize_run(Workspace(p).events_log, state))
    return out
