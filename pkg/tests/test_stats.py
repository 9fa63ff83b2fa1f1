import pytest
from hypothesis import given, strategies as st

from conftest import golden, profile
from proofloop import runner
from proofloop.events import Event, EventKind
from proofloop.state import Workspace
from proofloop.stats import (
    AgentInvocation,
    RunStats,
    aggregate,
    lower_median,
    render_tables,
    summarize_run,
    tag_distribution,
    wallclock_distribution,
)
from proofloop.types import AgentRole, Outcome, Phase, TagTally


def runs_with(trace_backs, **kw):
    return [RunStats(problem_id=f"p{i}", trace_backs=tb, **kw) for i, tb in enumerate(trace_backs)]


def test_mean_and_share_of_trace_backs():
    agg = aggregate(runs_with([3, 0, 1, 0]))
    assert agg.mean_trace_backs == 1.0 and agg.pct_with_tb == 50.0


def test_all_zero_runs():
    agg = aggregate(runs_with([0, 0, 0]))
    assert agg.mean_trace_backs == 0.0 and agg.pct_with_tb == 0.0 and agg.mean_replans == 0.0


def test_aggregate_needs_runs():
    with pytest.raises(ValueError):
        aggregate([])


def test_process_summary_rendering():
    # 61 trace-backs over 44 runs, 16 of which have at least one.
    tbs = [4] * 13 + [3] * 3 + [0] * 28
    assert aggregate(runs_with(tbs)).process_summary() == "N=44, mean TB 1.39, %≥1 TB 36.4"


def test_tag_distribution_percentages():
    assert tag_distribution([TagTally(2, 0, 3)]).as_tuple() == (40.0, 0.0, 60.0)


def test_tag_distribution_rendering():
    assert tag_distribution([TagTally(1966, 3, 2603)]).summary() == "4,572 claims, 43.0 / 0.07 / 56.9"


def test_empty_tag_distribution_is_flagged():
    d = tag_distribution([TagTally()])
    assert d.empty and d.claims == 0 and d.as_tuple() == (0.0, 0.0, 0.0)


@given(st.lists(st.tuples(st.integers(0, 50), st.integers(0, 50), st.integers(0, 50)), min_size=1))
def test_tag_percentages_sum_to_100(tallies):
    d = tag_distribution([TagTally(*t) for t in tallies])
    if not d.empty:
        assert sum(d.as_tuple()) == pytest.approx(100.0)


@pytest.mark.parametrize("values, want", [([5], 5), ([1, 2], 1), ([3, 1, 2], 2), ([4, 1, 3, 2], 2)])
def test_lower_median(values, want):
    assert lower_median(values) == want


def _with_wall(pid, minutes):
    r = RunStats(problem_id=pid)
    r.record(AgentInvocation(AgentRole.REASONER, minutes * 60.0, False, Phase.STEP_EXECUTION))
    return r


def test_wall_clock_averages_runs_per_problem_first():
    runs = [_with_wall("a", 10), _with_wall("a", 30), _with_wall("b", 40), _with_wall("c", 1)]
    agg = aggregate(runs)
    assert agg.mean_wall_minutes == pytest.approx((20 + 40 + 1) / 3)
    assert agg.median_wall_minutes == 20 and agg.max_wall_minutes == 40 and agg.max_problem == "b"
    assert wallclock_distribution(runs).splitlines()[1] == "a,2,20.0000"


def test_calls_count_both_reasoner_variants():
    r = RunStats()
    for role in (AgentRole.REASONER, AgentRole.REASONER_NON_CODING, AgentRole.VERIFIER):
        r.record(AgentInvocation(role, 1.0, False, Phase.STEP_EXECUTION))
    assert r.calls(AgentRole.REASONER) == 2 and r.calls(AgentRole.VERIFIER) == 1


def test_render_tables_shapes():
    text = render_tables([("A", aggregate(runs_with([1, 0]))), ("B", aggregate(runs_with([2])))])
    blocks = text.split("\n\n")
    assert len(blocks) == 3
    assert [len(b.strip().splitlines()) for b in blocks] == [3, 3, 3]
    assert blocks[0].splitlines()[1].split("\t")[:4] == ["A", "2", "0.0", "0.50"]


def test_run_stats_round_trip():
    r = _with_wall("x", 3)
    r.tag_tally = TagTally(1, 2, 3)
    assert RunStats.from_dict(r.to_dict()) == r


# -- derived from event logs ---------------------------------------------------


def test_summary_from_golden_log_matches_live_counters(tmp_path):
    outcome, _ = runner.replay(golden("imo2025_6"), tmp_path)
    state = outcome.final_state
    derived = summarize_run(Workspace(state.workspace).events_log, state)
    assert derived.trace_backs == state.stats.trace_backs == 12
    assert derived.replans == 2 and derived.flags == []
    assert derived.wall_clock_total == pytest.approx(state.stats.wall_clock_total)
    assert derived.invocations == state.stats.invocations
    assert derived.tag_tally == state.stats.tag_tally


def test_summary_is_reproducible_from_saved_workspace(tmp_path):
    outcome, _ = runner.replay(golden("apex2025_2"), tmp_path)
    ws = Workspace(outcome.final_state.workspace)
    again = runner.collect_workspaces([ws.path])
    assert again[0].to_dict() == summarize_run(ws.events_log, outcome.final_state).to_dict()


def test_corrupt_lines_are_flagged(tmp_path):
    outcome, _ = runner.replay(golden("exploration_solved"), tmp_path)
    state = outcome.final_state
    log = Workspace(state.workspace).events_log
    lines = log.read_text().splitlines() + ["{broken", '{"ts": "t", "kind": "Dispatch", "payload": {}}']
    stats = summarize_run(lines, state)
    assert stats.flags == ["corrupt-log:2"]


def test_summary_flags_empty_and_unfinished():
    class S:
        problem_id = "p"
        outcome = Outcome.IN_PROGRESS

    stats = summarize_run([Event("t", EventKind.PHASE_ENTER, {"phase": "Exploration"})], S())
    assert stats.flags == ["no-dispatches", "not-terminal"]


def test_simulated_cohorts_conserve_counts(tmp_path):
    runs = runner.simulate(profile("default"), 20, seed=5, workdir=tmp_path, problems=5)
    again = runner.simulate(profile("default"), 20, seed=5, workdir=tmp_path / "b", problems=5)
    assert [r.to_dict() for r in runs] == [r.to_dict() for r in again]
    agg = aggregate(runs)
    assert agg.mean_trace_backs == pytest.approx(sum(r.trace_backs for r in runs) / 20)
    assert {r.problem_id for r in runs} == {f"sim{i:04d}" for i in range(5)}
    total_calls = sum(len(r.invocations) for r in runs)
    by_role = sum(r.calls(role) for r in runs for role in (AgentRole.REASONER, AgentRole.VERIFIER, AgentRole.META))
    assert by_role == total_calls
