"""Run statistics and benchmark-level aggregation.

Per-run numbers are recomputed from the event log plus the final state, so
they can be regenerated offline from any saved workspace.
"""

from __future__ import annotations

import statistics
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

from .events import Event, EventKind, read_events
from .types import AgentRole, Outcome, Phase, TagTally


@dataclass
class AgentInvocation:
    role: AgentRole
    wall_seconds: float
    timed_out: bool
    phase: Phase
    step: int | None = None
    session: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "role": self.role.value,
            "wall_seconds": self.wall_seconds,
            "timed_out": self.timed_out,
            "phase": self.phase.value,
            "step": self.step,
            "session": self.session,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "AgentInvocation":
        return cls(
            role=AgentRole(d["role"]),
            wall_seconds=float(d["wall_seconds"]),
            timed_out=bool(d["timed_out"]),
            phase=Phase(d["phase"]),
            step=d.get("step"),
            session=d.get("session", ""),
        )


@dataclass
class RunStats:
    problem_id: str = ""
    invocations: list[AgentInvocation] = field(default_factory=list)
    trace_backs: int = 0
    replans: int = 0
    solved_in_exploration: bool = False
    wall_clock_total: float = 0.0
    tag_tally: TagTally = field(default_factory=TagTally)
    step_reports: int = 0
    outcome: Outcome = Outcome.IN_PROGRESS
    flags: list[str] = field(default_factory=list)

    def calls(self, role: AgentRole) -> int:
        if role.is_reasoner:
            return sum(1 for i in self.invocations if i.role.is_reasoner)
        return sum(1 for i in self.invocations if i.role is role)

    def record(self, invocation: AgentInvocation) -> None:
        self.invocations.append(invocation)
        self.wall_clock_total += invocation.wall_seconds

    def to_dict(self) -> dict[str, Any]:
        return {
            "problem_id": self.problem_id,
            "invocations": [i.to_dict() for i in self.invocations],
            "trace_backs": self.trace_backs,
            "replans": self.replans,
            "solved_in_exploration": self.solved_in_exploration,
            "wall_clock_total": self.wall_clock_total,
            "tag_tally": list(self.tag_tally.as_tuple()),
            "step_reports": self.step_reports,
            "outcome": self.outcome.value,
            "flags": list(self.flags),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "RunStats":
        return cls(
            problem_id=d.get("problem_id", ""),
            invocations=[AgentInvocation.from_dict(x) for x in d.get("invocations", [])],
            trace_backs=int(d.get("trace_backs", 0)),
            replans=int(d.get("replans", 0)),
            solved_in_exploration=bool(d.get("solved_in_exploration", False)),
            wall_clock_total=float(d.get("wall_clock_total", 0.0)),
            tag_tally=TagTally(*d.get("tag_tally", (0, 0, 0))),
            step_reports=int(d.get("step_reports", 0)),
            outcome=Outcome(d.get("outcome", Outcome.IN_PROGRESS.value)),
            flags=list(d.get("flags", [])),
        )


def summarize_run(events: str | Path | Iterable[Event] | Iterable[str], state) -> RunStats:
    """Derive a run's statistics from its event log and final state."""
    if isinstance(events, (str, Path)):
        parsed, bad = read_events(events)
    else:
        items = list(events)
        if items and all(isinstance(e, Event) for e in items):
            parsed, bad = items, 0
        else:
            parsed, bad = read_events(items)

    stats = RunStats(problem_id=state.problem_id, outcome=state.outcome)
    tally = TagTally()
    for ev in parsed:
        p = ev.payload
        try:
            if ev.kind is EventKind.DISPATCH:
                stats.record(
                    AgentInvocation(
                        role=AgentRole(p["role"]),
                        wall_seconds=float(p["wall"]),
                        timed_out=bool(p["timed_out"]),
                        phase=Phase(p["phase"]),
                        step=p.get("step"),
                        session=p.get("session", ""),
                    )
                )
            elif ev.kind is EventKind.TRACE_BACK:
                stats.trace_backs += 1
            elif ev.kind is EventKind.REPLAN_DECIDED and p.get("applied"):
                stats.replans += 1
            elif ev.kind is EventKind.SOLVED and p.get("via") == "exploration":
                stats.solved_in_exploration = True
            elif (
                ev.kind is EventKind.VERDICT_PARSED
                and p.get("verdict") == "ACCEPT"
                and (p.get("step") or 0) >= 1
                and "tags" in p
            ):
                tally = tally + TagTally(*p["tags"])
                stats.step_reports += 1
        except (KeyError, TypeError, ValueError):
            bad += 1
    stats.tag_tally = tally
    if bad:
        stats.flags.append(f"corrupt-log:{bad}")
    if not stats.invocations:
        stats.flags.append("no-dispatches")
    if state.outcome is Outcome.IN_PROGRESS:
        stats.flags.append("not-terminal")
    return stats


def lower_median(values: Sequence[float]) -> float:
    """Median; for an even count, the lower of the two middle values."""
    ordered = sorted(values)
    return ordered[(len(ordered) - 1) // 2]


@dataclass(frozen=True)
class TagDistribution:
    step_reports: int
    claims: int
    pct_verified: float
    pct_easy_verify: float
    pct_hard_verify: float
    empty: bool = False

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.pct_verified, self.pct_easy_verify, self.pct_hard_verify)

    def summary(self) -> str:
        return (
            f"{self.claims:,} claims, {self.pct_verified:.1f} / "
            f"{self.pct_easy_verify:.2f} / {self.pct_hard_verify:.1f}"
        )


def tag_distribution(runs: Iterable[RunStats | TagTally]) -> TagDistribution:
    total = TagTally()
    reports = 0
    for r in runs:
        if isinstance(r, TagTally):
            total = total + r
        else:
            total = total + r.tag_tally
            reports += r.step_reports
    n = total.total
    if n == 0:
        return TagDistribution(reports, 0, 0.0, 0.0, 0.0, empty=True)
    return TagDistribution(
        reports,
        n,
        100.0 * total.verified / n,
        100.0 * total.easy_verify / n,
        100.0 * total.hard_verify / n,
    )


@dataclass(frozen=True)
class BenchmarkAggregate:
    n_runs: int
    pct_solved_in_exploration: float
    mean_trace_backs: float
    mean_replans: float
    pct_with_tb: float
    pct_with_rp: float
    mean_wall_minutes: float
    median_wall_minutes: float
    max_wall_minutes: float
    max_problem: str
    mean_reasoner_calls: float
    mean_verifier_calls: float
    mean_meta_calls: float
    tags: TagDistribution

    def process_summary(self) -> str:
        return (
            f"N={self.n_runs}, mean TB {self.mean_trace_backs:.2f}, "
            f"%≥1 TB {self.pct_with_tb:.1f}"
        )


def aggregate(runs: Sequence[RunStats]) -> BenchmarkAggregate:
    """Aggregate runs into one benchmark row.

    Control-flow columns average over runs. Wall-clock and call-count columns
    first average each problem over its runs, then summarize over problems.
    """
    if not runs:
        raise ValueError("aggregate needs at least one run")
    n = len(runs)
    pct = lambda k: 100.0 * k / n  # noqa: E731

    by_problem: dict[str, list[RunStats]] = defaultdict(list)
    for i, r in enumerate(runs):
        by_problem[r.problem_id or f"run{i}"].append(r)
    per_problem_wall = {
        pid: statistics.fmean(r.wall_clock_total / 60.0 for r in rs) for pid, rs in by_problem.items()
    }
    walls = list(per_problem_wall.values())
    max_problem = max(sorted(per_problem_wall), key=per_problem_wall.__getitem__)

    def mean_calls(role: AgentRole) -> float:
        return statistics.fmean(
            statistics.fmean(r.calls(role) for r in rs) for rs in by_problem.values()
        )

    return BenchmarkAggregate(
        n_runs=n,
        pct_solved_in_exploration=pct(sum(r.solved_in_exploration for r in runs)),
        mean_trace_backs=statistics.fmean(r.trace_backs for r in runs),
        mean_replans=statistics.fmean(r.replans for r in runs),
        pct_with_tb=pct(sum(r.trace_backs >= 1 for r in runs)),
        pct_with_rp=pct(sum(r.replans >= 1 for r in runs)),
        mean_wall_minutes=statistics.fmean(walls),
        median_wall_minutes=lower_median(walls),
        max_wall_minutes=max(walls),
        max_problem=max_problem,
        mean_reasoner_calls=mean_calls(AgentRole.REASONER),
        mean_verifier_calls=mean_calls(AgentRole.VERIFIER),
        mean_meta_calls=mean_calls(AgentRole.META),
        tags=tag_distribution(runs),
    )


# Table layouts. Delimiter is a tab; numbers use fixed precision per column.

PROCESS_HEADER = ("Benchmark", "N", "Solved in expl. (%)", "Mean trace-backs",
                  "Mean re-plans", "% w/ >=1 TB", "% w/ >=1 RP")
COST_HEADER = ("Benchmark", "Mean", "Median", "Max", "Max problem", "Reas.", "Veri.", "Meta")
TAG_HEADER = ("Benchmark", "# step reports", "# claims", "% [verified]",
              "% [easy-verify]", "% [hard-verify]")


def process_row(name: str, agg: BenchmarkAggregate) -> tuple[str, ...]:
    return (
        name,
        str(agg.n_runs),
        f"{agg.pct_solved_in_exploration:.1f}",
        f"{agg.mean_trace_backs:.2f}",
        f"{agg.mean_replans:.2f}",
        f"{agg.pct_with_tb:.1f}",
        f"{agg.pct_with_rp:.1f}",
    )


def cost_row(name: str, agg: BenchmarkAggregate) -> tuple[str, ...]:
    return (
        name,
        f"{agg.mean_wall_minutes:.2f}",
        f"{agg.median_wall_minutes:.2f}",
        f"{agg.max_wall_minutes:.2f}",
        agg.max_problem,
        f"{agg.mean_reasoner_calls:.2f}",
        f"{agg.mean_verifier_calls:.2f}",
        f"{agg.mean_meta_calls:.2f}",
    )


def tag_row(name: str, dist: TagDistribution) -> tuple[str, ...]:
    return (
        name,
        f"{dist.step_reports:,}",
        f"{dist.claims:,}",
        f"{dist.pct_verified:.1f}",
        f"{dist.pct_easy_verify:.2f}",
        f"{dist.pct_hard_verify:.1f}",
    )


def _table(header: Sequence[str], rows: Iterable[Sequence[str]], sep: str) -> str:
    return "".join(sep.join(r) + "\n" for r in [header, *rows])


def render_tables(named: Sequence[tuple[str, BenchmarkAggregate]], sep: str = "\t") -> str:
    """The three table shapes (process, cost, tags), blank-line separated."""
    parts = [
        _table(PROCESS_HEADER, (process_row(n, a) for n, a in named), sep),
        _table(COST_HEADER, (cost_row(n, a) for n, a in named), sep),
        _table(TAG_HEADER, (tag_row(n, a.tags) for n, a in named), sep),
    ]
    return "\n".join(parts)


def wallclock_distribution(runs: Iterable[RunStats]) -> str:
    """Per-problem mean wall-clock minutes as CSV, for external plotting."""
    by_problem: dict[str, list[float]] = defaultdict(list)
    for r in runs:
        by_problem[r.problem_id].append(r.wall_clock_total / 60.0)
    lines = ["problem_id,runs,mean_minutes"]
    for pid in sorted(by_problem):
        vals = by_problem[pid]
        lines.append(f"{pid},{len(vals)},{statistics.fmean(vals):.4f}")
    return "\n".join(lines) + "\n"
