import sys
from pathlib import Path

import pytest

from conftest import golden
from proofloop import runner
from proofloop.agents import ScriptedBackend
from proofloop.config import Config
from proofloop.errors import ScriptDivergence
from proofloop.events import Event, EventKind
from proofloop.orchestrator import run_problem
from proofloop.protocol import documents as doc
from proofloop.state import Workspace
from proofloop.types import Outcome
from trajectory import (
    Recorder,
    check_all,
    check_bounds,
    check_forbidden_injection,
    check_pure_latching,
    check_sessions,
    check_traceability,
    events_of,
)

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tools"))
from build_fixtures import TIMEOUT, Author  # noqa: E402

CFG = Config(simulated_clock=True, fsync=False)


def opening(a: Author, goals=("Only step.",), hints="No hints.") -> None:
    a.reasoner("EXPLORE", doc.exploration_doc("NEED_PLAN", "Nothing obvious."))
    a.meta("PRE_PLANNING", hints)
    a.reasoner("PLAN", doc.plan_doc(goals))


def closing(a: Author) -> None:
    a.reasoner("SOLUTION", doc.solution_doc("Write-up."))
    a.review(0, doc.verdict_doc("ACCEPT"), task="SOLUTION_REVIEW")


def run(a: Author, tmp_path, config=CFG):
    outcome, backend = runner.replay(a.b.build(), tmp_path, config=config)
    assert backend.remaining == 0, "script has unconsumed entries"
    return outcome.final_state


def kinds(state, kind):
    return [e.payload for e in events_of(state) if e.kind is kind]


# -- golden trajectories ---------------------------------------------------------


@pytest.mark.parametrize("name", ["apex2025_2", "imo2025_6", "exploration_solved"])
def test_golden_replays_match_expectations(name, tmp_path):
    script = golden(name)
    outcome, backend = runner.replay(script, tmp_path)
    assert backend.remaining == 0
    assert runner.mismatches(outcome.final_state, script.expected) == []
    assert check_all(outcome.final_state, Config.from_dict(script.config)) == []


def test_imo_wall_clock_is_eight_hours_eighteen_minutes(tmp_path):
    outcome, _ = runner.replay(golden("imo2025_6"), tmp_path)
    assert outcome.final_state.clock_seconds == 8 * 3600 + 18 * 60


def test_forbidden_directions_reach_every_later_reasoner_call(tmp_path):
    script = golden("imo2025_6")
    state = runner.start(script.problem_id, script.statement, CFG, tmp_path)
    rec = Recorder(ScriptedBackend(script), state)
    run_problem(CFG, rec, state)
    assert len(state.failed_records) == 2
    assert sum(n > 0 for _, n in rec.requests if _.role.is_reasoner) > 0
    assert check_forbidden_injection(rec.requests, state) == []


def test_pure_reasoning_latches_until_replan(tmp_path):
    outcome, _ = runner.replay(golden("apex2025_2"), tmp_path)
    events = events_of(outcome.final_state)
    assert any(e.kind is EventKind.PURE_REASONING_ON for e in events)
    assert check_pure_latching(events) == []


# -- challenge loop ----------------------------------------------------------------


def test_challenge_challenge_accept_counts_three_rounds(tmp_path):
    a = Author("cca", "s")
    opening(a)
    a.reasoner("STEP", doc.report_doc("First try.", hard=1), step=1)
    a.review(1, doc.verdict_doc("CHALLENGE", objections="Gap one."))
    a.reasoner("DEFEND", doc.report_doc("Fixed one.", hard=1), step=1)
    a.re_review(1, doc.verdict_doc("CHALLENGE", objections="Gap two."))
    a.reasoner("DEFEND", doc.report_doc("Fixed two.", verified=1), step=1)
    a.re_review(1, doc.verdict_doc("ACCEPT", entries=[("Lemma", "Done.")]))
    closing(a)
    state = run(a, tmp_path)
    assert state.outcome is Outcome.SOLVED
    assert state.step(1).challenge_rounds == 3
    assert [p["round"] for p in kinds(state, EventKind.CHALLENGE_ROUND)] == [1, 2]
    debate = Workspace(state.workspace).step_debate(1).read_text()
    assert "Gap one." in debate and "Fixed two." in debate


def test_fifth_challenge_is_a_stalemate(tmp_path):
    a = Author("stale", "s")
    opening(a)
    a.reasoner("STEP", doc.report_doc("Try.", hard=1), step=1)
    a.review(1, doc.verdict_doc("CHALLENGE", objections="No."))
    for _ in range(4):
        a.reasoner("DEFEND", doc.report_doc("Defense.", hard=1), step=1)
        a.re_review(1, doc.verdict_doc("CHALLENGE", objections="Still no."))
    a.meta("REPLAN_DECISION", doc.replan_doc("ABORT", "No way forward."), step=1)
    state = run(a, tmp_path)
    assert kinds(state, EventKind.STALEMATE) == [{"step": 1, "rounds": 5}]
    assert kinds(state, EventKind.REPLAN_PROPOSED)[0]["trigger"] == "Stalemate"
    assert state.outcome is Outcome.ABORTED
    assert check_all(state, CFG) == []


def test_verifier_trace_back_recreates_sessions(tmp_path):
    a = Author("tb", "s")
    opening(a, goals=("One.", "Two."))
    a.step_ok(1, "One done.", entries=[("Lemma", "L1")])
    a.reasoner("STEP", doc.report_doc("Two.", hard=1), step=2)
    a.review(2, doc.verdict_doc("TRACE_BACK", target=1, logic_gate="FAIL: step 1 is wrong."))
    a.new_attempt()
    a.step_ok(1, "One again.", entries=[("Lemma", "L1 fixed")])
    a.step_ok(2, "Two again.")
    closing(a)
    state = run(a, tmp_path)
    assert state.outcome is Outcome.SOLVED and state.stats.trace_backs == 1
    assert "verify-tb-step01-r1" in [p["session"] for p in kinds(state, EventKind.DISPATCH)]
    assert [r.text for r in state.verified_results] == ["L1 fixed"]


def test_malformed_verdict_escalates_to_meta(tmp_path):
    a = Author("mal", "s")
    opening(a)
    a.reasoner("STEP", doc.report_doc("Try.", hard=1), step=1)
    a.review(1, "## Verdict\nTRACE_BACK\n")
    a.meta("REPLAN_DECISION", doc.replan_doc("CONTINUE", "Carry on."), step=1)
    a.step_ok(1, "Again.")
    closing(a)
    state = run(a, tmp_path)
    v = kinds(state, EventKind.VERDICT_PARSED)[0]
    assert v["verdict"] == "ESCALATION"
    assert state.outcome is Outcome.SOLVED and state.stats.trace_backs == 0


def test_malformed_replan_decision_twice_aborts(tmp_path):
    a = Author("mal2", "s")
    opening(a)
    a.reasoner("STEP", doc.report_doc("Try.", hard=1), step=1)
    a.review(1, doc.verdict_doc("PROPOSE_REPLAN"))
    a.meta("REPLAN_DECISION", "I think we should re-plan.", step=1)
    a.meta("REPLAN_DECISION", "## REPLAN_DECISION\nAPPROVE_REPLAN\n", step=1)
    state = run(a, tmp_path)
    assert state.outcome is Outcome.ABORTED and state.plan_version == 1
    assert check_traceability(events_of(state)) == []


def test_plan_blocked_report_routes_to_replan(tmp_path):
    a = Author("blocked", "s")
    opening(a)
    a.reasoner("STEP", doc.report_doc("The plan cannot work.", plan_blocked=True), step=1)
    a.meta("REPLAN_DECISION", doc.replan_doc("ABORT", "Give up."), step=1)
    state = run(a, tmp_path)
    assert kinds(state, EventKind.REPLAN_PROPOSED)[0]["trigger"] == "PlanBlocked"


def test_approved_replan_re_explores_with_new_attempt(tmp_path):
    a = Author("rp", "s")
    opening(a)
    a.reasoner("STEP", doc.report_doc("Try.", hard=1), step=1)
    a.review(1, doc.verdict_doc("PROPOSE_REPLAN", objections="Wrong approach."))
    a.meta("REPLAN_DECISION", doc.replan_doc("APPROVE_REPLAN", "Dead end.", plan_summary="v1",
                                             forbidden=["Do not use approach A."]), step=1)
    a.replanned()
    opening(a, goals=("New step.",))
    a.step_ok(1, "Works.")
    closing(a)
    state = run(a, tmp_path)
    assert state.outcome is Outcome.SOLVED and state.plan_version == 2
    assert state.failed_records[0].forbidden_directions == ["Do not use approach A."]
    assert state.failed_records[0].trigger == "VerifierProposed"


# -- exploration -----------------------------------------------------------------


def test_rejected_early_solution_is_demoted(tmp_path):
    a = Author("demote", "s")
    a.reasoner("EXPLORE", doc.exploration_doc("SOLVED", "Looks done."))
    a.review(0, doc.verdict_doc("CHALLENGE", objections="Case n=1 missing."), task="EXPLORE_REVIEW")
    a.meta("EXPLORE_DECISION", doc.exploration_decision_doc("PROCEED_TO_PLAN"))
    a.meta("PRE_PLANNING", "Handle n=1.")
    a.reasoner("PLAN", doc.plan_doc(["Everything."]))
    a.step_ok(1, "All cases.")
    closing(a)
    state = run(a, tmp_path)
    assert state.outcome is Outcome.SOLVED and not state.stats.solved_in_exploration
    assert kinds(state, EventKind.SOLUTION_REJECTED) == [{"via": "exploration"}]


def test_exploration_round_cap(tmp_path):
    a = Author("cap", "s")
    a.reasoner("EXPLORE", doc.exploration_doc("PARTIALLY_SOLVED", "Some."))
    a.meta("EXPLORE_DECISION", doc.exploration_decision_doc("CONTINUE_EXPLORATION"))
    a.reasoner("EXPLORE", doc.exploration_doc("PARTIALLY_SOLVED", "More."))
    a.meta("PRE_PLANNING", "")
    a.reasoner("PLAN", doc.plan_doc(["Finish."]))
    a.step_ok(1, "Done.")
    closing(a)
    state = run(a, tmp_path)
    assert state.exploration_rounds_used == 2 and state.outcome is Outcome.SOLVED


# -- planning and solution -------------------------------------------------------


def test_oversized_plan_is_retried_once(tmp_path):
    a = Author("big", "s")
    a.reasoner("EXPLORE", doc.exploration_doc("NEED_PLAN", "."))
    a.meta("PRE_PLANNING", "")
    a.reasoner("PLAN", doc.plan_doc([f"g{i}" for i in range(21)]))
    a.b.add("Reasoner", "Resume", doc.plan_doc([f"g{i}" for i in range(7)]),
            task="PLAN", session="reason-big-a1", contains="previous plan was rejected")
    for n in range(1, 8):
        a.step_ok(n, f"step {n}")
    closing(a)
    state = run(a, tmp_path)
    assert state.outcome is Outcome.SOLVED and state.plan.total_steps == 7


def test_invalid_plans_abort_after_retries(tmp_path):
    a = Author("bad", "s")
    a.reasoner("EXPLORE", doc.exploration_doc("NEED_PLAN", "."))
    a.meta("PRE_PLANNING", "")
    a.reasoner("PLAN", "no steps here")
    a.reasoner("PLAN", doc.plan_doc([f"g{i}" for i in range(25)]))
    state = run(a, tmp_path)
    assert state.outcome is Outcome.ABORTED and "structurally invalid" in state.abort_reason


def test_solution_rejected_then_retried(tmp_path):
    a = Author("sol", "s")
    opening(a)
    a.step_ok(1, "Done.")
    a.reasoner("SOLUTION", doc.solution_doc("Draft."))
    a.review(0, doc.verdict_doc("CHALLENGE", objections="Sloppy."), task="SOLUTION_REVIEW")
    a.b.add("Reasoner", "Resume", doc.solution_doc("Better."), task="SOLUTION", session="reason-sol-a1",
            contains="Sloppy.")
    a.review(0, doc.verdict_doc("ACCEPT"), task="SOLUTION_REVIEW")
    state = run(a, tmp_path)
    assert state.outcome is Outcome.SOLVED and state.solution_retries_used == 1
    assert Workspace(state.workspace).solution_md.read_text().strip().endswith("Better.")


def test_solution_rejected_three_times_aborts(tmp_path):
    a = Author("sol3", "s")
    opening(a)
    a.step_ok(1, "Done.")
    for _ in range(3):
        a.reasoner("SOLUTION", doc.solution_doc("Draft."))
        a.review(0, doc.verdict_doc("CHALLENGE", objections="No."), task="SOLUTION_REVIEW")
    state = run(a, tmp_path)
    assert state.outcome is Outcome.ABORTED and state.solution_retries_used == 2
    assert check_bounds(events_of(state), state, CFG) == []


# -- timeouts ------------------------------------------------------------------


def test_third_consecutive_timeout_goes_to_replan_decision(tmp_path):
    a = Author("slow", "s")
    opening(a)
    for _ in range(2):
        a.reasoner("STEP", "partial", step=1, sleep=TIMEOUT)
        a.meta("INTERVENTION", doc.intervention_doc("RETRY_STEP", guidance="Try harder."), step=1)
    a.reasoner("STEP", "partial", step=1, sleep=TIMEOUT)
    a.meta("REPLAN_DECISION", doc.replan_doc("ABORT", "Too slow."), step=1)
    state = run(a, tmp_path)
    assert [p["consecutive"] for p in kinds(state, EventKind.TIMEOUT)] == [1, 2, 3]
    assert kinds(state, EventKind.REPLAN_PROPOSED)[0]["trigger"] == "ChronicTimeouts"
    walls = [p["wall"] for p in kinds(state, EventKind.DISPATCH) if p["timed_out"]]
    assert walls == [1800.0] * 3


def test_intervention_guidance_reaches_the_retry(tmp_path):
    a = Author("guide", "s")
    opening(a)
    a.reasoner("STEP", "partial", step=1, sleep=TIMEOUT)
    a.meta("INTERVENTION", doc.intervention_doc("RETRY_STEP", guidance="Use symmetry.",
                                                pure_reasoning=True), step=1)
    a.pure = True
    a.b.add("ReasonerNonCoding", "Resume", doc.report_doc("Symmetric.", hard=1), task="STEP",
            session="reason-guide-a1", step=1, contains="Use symmetry.")
    a.review(1, doc.verdict_doc("ACCEPT"))
    closing(a)
    state = run(a, tmp_path)
    assert state.outcome is Outcome.SOLVED and state.pure_reasoning_mode
    assert state.step(1).consecutive_timeouts == 0


def test_dispatch_budget_aborts(tmp_path):
    a = Author("budget", "s")
    opening(a)
    state = run(a, tmp_path, config=CFG.replace(max_dispatches=3))
    assert state.outcome is Outcome.ABORTED and "dispatch budget" in state.abort_reason


def test_divergence_surfaces_field(tmp_path):
    a = Author("div", "s")
    a.meta("EXPLORE", "wrong role")
    with pytest.raises(ScriptDivergence) as info:
        runner.replay(a.b.build(), tmp_path, config=CFG)
    assert info.value.field == "role"


# -- resume --------------------------------------------------------------------


class Crash(Exception):
    pass


def _crash_at(k):
    def hook(state, n):
        if n == k:
            raise Crash

    return hook


@pytest.mark.parametrize("k", [1, 5, 17, 40])
def test_resume_after_crash_matches_uninterrupted_run(k, tmp_path):
    script = golden("apex2025_2")
    ref, _ = runner.replay(script, tmp_path / "ref")
    with pytest.raises(Crash):
        runner.replay(script, tmp_path / "crash", on_checkpoint=_crash_at(k))
    ws = Workspace.for_problem(tmp_path / "crash", script.problem_id)
    resumed, backend = runner.resume_replay(script, ws.path)
    assert backend.remaining == 0
    assert runner.observed(resumed.final_state) == runner.observed(ref.final_state)
    ref_ws = Workspace(ref.final_state.workspace)
    assert ws.events_log.read_text() == ref_ws.events_log.read_text()
    assert ws.canonical.read_text() == ref_ws.canonical.read_text()


# -- the trajectory checker catches violations -----------------------------------


def _dispatch(role, session, mode, task="STEP", step=1, wall=10.0):
    return Event("t", EventKind.DISPATCH, {"role": role, "session": session, "mode": mode, "task": task,
                                           "phase": "StepExecution", "step": step, "wall": wall,
                                           "timed_out": False})


def test_checker_flags_untraceable_trace_back():
    events = [Event("t", EventKind.VERDICT_PARSED, {"step": 3, "verdict": "ACCEPT"}),
              Event("t", EventKind.TRACE_BACK, {"source": "verifier", "to": 2, "from": 3, "attempt": 2})]
    assert check_traceability(events)


def test_checker_flags_abort_without_cause():
    assert check_traceability([Event("t", EventKind.ABORTED, {"reason": "felt like it"})])


def test_checker_flags_second_fresh_meta_and_stale_reasoner(tmp_path):
    state = runner.start("x", "s", CFG, tmp_path)
    events = [
        _dispatch("MetaStrategist", "meta-x", "Fresh", task="PRE_PLANNING", step=None),
        _dispatch("MetaStrategist", "meta-x", "Fresh", task="INTERVENTION"),
        _dispatch("Reasoner", "reason-x-a2", "Fresh"),
        _dispatch("Verifier", "verify-x-step01", "Resume", task="REVIEW"),
    ]
    problems = check_sessions(events, state)
    assert any("second Fresh" in p for p in problems)
    assert any("reason-x-a1" in p for p in problems)
    assert any("resumed" in p for p in problems)


def test_checker_flags_overlong_dispatch_and_pure_violation(tmp_path):
    state = runner.start("y", "s", CFG, tmp_path)
    long = _dispatch("Verifier", "verify-y-step01", "Fresh", task="REVIEW", wall=1300.0)
    assert check_bounds([long], state, CFG)
    events = [Event("t", EventKind.PURE_REASONING_ON, {"step": 1}), _dispatch("Reasoner", "reason-y-a1", "Resume")]
    assert check_pure_latching(events)


PLACEHOLDERS = ("$step", "$round", "$version", "$goal", "$document", "$extra", "$trigger", "$timeouts",
                "$min_steps", "$max_steps", "$hard_max")


@pytest.mark.parametrize("name", ["apex2025_2", "imo2025_6"])
def test_instructions_have_no_unfilled_placeholders(name, tmp_path):
    script = golden(name)
    state = runner.start(script.problem_id, script.statement, CFG, tmp_path)
    rec = Recorder(ScriptedBackend(script), state)
    run_problem(CFG, rec, state)
    for req, _ in rec.requests:
        left = [p for p in PLACEHOLDERS if p in req.instruction]
        assert left == [], f"{req.task}: {left}"
        if req.step:
            assert f"step {req.step}" in req.instruction
