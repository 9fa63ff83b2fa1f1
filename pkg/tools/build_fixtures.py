"""Author the golden replay scripts and freeze them as YAML.

Run from the repository root::

    python3 tools/build_fixtures.py

The scripts are written by hand from the two published case-study
trajectories. Each entry pins the role, session mode and session name the
orchestrator must use, so a replay also checks the session policy.
"""

from __future__ import annotations

import sys
from collections import Counter
from pathlib import Path

from proofloop.agents import ScriptBuilder
from proofloop.protocol import documents as doc

OUT = Path(__file__).resolve().parents[1] / "src" / "proofloop" / "fixtures"

R, RNC, V, M = "Reasoner", "ReasonerNonCoding", "Verifier", "MetaStrategist"
FRESH, RESUME = "Fresh", "Resume"


class Author:
    """Tracks the session names a well-behaved orchestrator should use."""

    def __init__(self, problem_id: str, statement: str):
        self.b = ScriptBuilder(problem_id, statement)
        self.pid = problem_id
        self.attempt = 1
        self.reasoner_spawned = False
        self.meta_spawned = False
        self.pure = False
        self.verifier_count: Counter[int] = Counter()
        self.current_verifier = ""

    # sessions

    def _reasoner(self):
        mode = RESUME if self.reasoner_spawned else FRESH
        self.reasoner_spawned = True
        return (RNC if self.pure else R), mode, f"reason-{self.pid}-a{self.attempt}"

    def _meta(self):
        mode = RESUME if self.meta_spawned else FRESH
        self.meta_spawned = True
        return M, mode, f"meta-{self.pid}"

    def _verifier(self, step: int):
        k = self.verifier_count[step]
        self.verifier_count[step] += 1
        name = f"verify-{self.pid}-step{step:02d}" + (f"-r{k}" if k else "")
        self.current_verifier = name
        return V, FRESH, name

    def new_attempt(self):
        """After a trace-back or re-plan."""
        self.attempt += 1
        self.reasoner_spawned = False

    def replanned(self):
        self.new_attempt()
        self.pure = False

    # entries

    def reasoner(self, task, respond, step=None, sleep=0.0, note=""):
        role, mode, name = self._reasoner()
        self.b.add(role, mode, respond, task=task, session=name, step=step, sleep=sleep, note=note)

    def meta(self, task, respond, step=None, sleep=0.0, note=""):
        role, mode, name = self._meta()
        self.b.add(role, mode, respond, task=task, session=name, step=step, sleep=sleep, note=note)

    def review(self, step, respond, task="REVIEW", sleep=0.0, note=""):
        role, mode, name = self._verifier(step)
        self.b.add(role, mode, respond, task=task, session=name, step=step, sleep=sleep, note=note)

    def re_review(self, step, respond, sleep=0.0):
        self.b.add(V, RESUME, respond, task="RE_REVIEW", session=self.current_verifier, step=step, sleep=sleep)

    def step_ok(self, n, report, entries=(), verified=0, hard=1, easy=0):
        self.reasoner("STEP", doc.report_doc(report, verified=verified, hard=hard, easy=easy), step=n)
        self.review(n, doc.verdict_doc("ACCEPT", entries=entries))


def set_walls(script, total: float, budgets=None):
    """Give non-timeout entries durations that sum (with timeouts) to ``total``."""
    budgets = budgets or {R: 1800, RNC: 1800, V: 1200, M: 600}
    weight = {R: 3, RNC: 3, V: 2, M: 1}
    fixed = sum(budgets[e.expect["role"]] for e in script.entries if e.sleep_seconds > budgets[e.expect["role"]])
    free = [e for e in script.entries if e.sleep_seconds <= budgets[e.expect["role"]]]
    units = sum(weight[e.expect["role"]] for e in free)
    per_unit = (total - fixed) / units
    acc = 0
    for e in free[:-1]:
        e.sleep_seconds = float(int(per_unit * weight[e.expect["role"]]))
        acc += e.sleep_seconds
    free[-1].sleep_seconds = float(total - fixed - acc)
    for e in free:
        assert 0 < e.sleep_seconds <= budgets[e.expect["role"]], e.sleep_seconds


TIMEOUT = 2400.0

# ---------------------------------------------------------------------------
# Apex 2025 Problem 2
# ---------------------------------------------------------------------------

APEX_STATEMENT = """\
Let P be a simple polygon whose sides lie on the grid lines of the unit square
lattice. For i = 1, 2, 3 let a_i be the number of unit squares having exactly
i of their edges on the boundary of P. Determine the largest real k such that
a_1 + a_2 > k a_3 for every such polygon.
"""

APEX_V1 = [
    "Fix the boundary-edge counting model.",
    "Compute a_1, a_2, a_3 on small polyominoes.",
    "Evaluate the comb family and the candidate constant 3/4.",
    "Prove the universal lower bound a_1 + a_2 > (3/4) a_3.",
    "Show the comb family approaches 3/4.",
    "Conclude k = 3/4.",
]

APEX_V2 = [
    "Fix the exact combinatorial model.",
    "Split the counts into inside and outside contributions.",
    "Find the correct candidate constant from fresh evidence.",
    "Prove the universal lower bound.",
    "Make the discharging proof independent of shape pathologies.",
    "Construct polygons approaching equality.",
    "Conclude sharpness and the largest value.",
]

APEX_FORBIDDEN = [
    "Do not assume 3/4 is the answer or the correct universal lower bound.",
    "Do not start the next plan by trying to repair the proof of the 3/4 lower bound.",
    "Do not prove any inequality whose main target is a universal RHS of 3/4 before "
    "independently re-establishing the correct candidate value.",
    "Do not reuse lemmas whose only role is to force or certify the false 3/4 bound.",
    "Do not restrict construction search to cases consistent with the 3/4 target; the next "
    "plan must actively look for a replacement target from fresh evidence.",
]

APEX_CAP_LEMMAS = [
    ("Lemma", "Around any lattice vertex, the four adjacent squares cannot alternate "
              "inside-outside-inside-outside cyclically."),
    ("Lemma", "If e(Q)=3 and f(Q) is the square across the boundary side opposite the unique "
              "same-colored neighbor of Q, then e(f(Q)) is 1 or 2."),
    ("Lemma", "For any square R with e(R) in {1,2}, at most e(R) three-edge squares map to R "
              "under the cap-target map."),
    ("Lemma", "Consequently, a_3 <= a_1 + 2 a_2."),
]


def apex():
    a = Author("apex2025_2", APEX_STATEMENT)
    a.reasoner("EXPLORE", doc.exploration_doc(
        "NEED_PLAN", "Small polyominoes suggest the ratio stays above 3/4; no proof yet."))
    a.meta("PRE_PLANNING", "## Hints\n- Small cases, then a discharging argument.\n")
    a.reasoner("PLAN", doc.plan_doc(APEX_V1))
    a.step_ok(1, "Counting model fixed.", entries=[("Definition", "e(Q) is the number of boundary edges of square Q.")])
    a.step_ok(2, "Small cases tabulated by script.", verified=2)
    a.step_ok(3, "Comb family counts computed and checked by script.", verified=3,
              entries=[("Computation", "Comb family C_m: a_1 = 2m+2, a_2 = m+3, a_3 = 4m.")])
    # Step 4: the Verifier objects, then four consecutive timeouts.
    a.reasoner("STEP", doc.report_doc("Local discharging over boundary-adjacent square types.", hard=3), step=4)
    a.review(4, doc.verdict_doc("CHALLENGE", objections="The discharging table does not close: "
                                "two-edge squares with opposite boundary edges propagate."))
    a.reasoner("DEFEND", "Partial: extending the local table; propagation case still open.", step=4,
               sleep=TIMEOUT, note="timeout 1")
    a.meta("INTERVENTION", doc.intervention_doc(
        "TRACE_BACK", target=4, pure_reasoning=True,
        diagnosis="The timeout is not a computation problem; the current purely local discharging "
                  "plan is structurally insufficient because the double-supported a_2 obstruction "
                  "can propagate.",
        guidance="Stop trying to close the same local table and model the obstruction chains globally."),
        step=4)
    a.new_attempt()
    a.pure = True
    a.reasoner("STEP", "Partial: global obstruction chains; unbounded strip propagation.", step=4,
               sleep=TIMEOUT, note="timeout 2")
    a.meta("INTERVENTION", doc.intervention_doc(
        "TRACE_BACK", target=4, pure_reasoning=True,
        diagnosis="The failure is strategic, not computational: the local discharging table keeps "
                  "running into the same unbounded strip-propagation obstruction.",
        guidance="Convert the obstruction into a component-level accounting problem."), step=4)
    a.new_attempt()
    a.reasoner("STEP", "Partial: component accounting; a_2 chains still unbounded.", step=4,
               sleep=TIMEOUT, note="timeout 3 (chronic)")
    a.meta("REPLAN_DECISION", doc.replan_doc(
        "TRACE_BACK_TO", target=4,
        reason="The failure is localized to Step 4's execution method: repeated timeouts indicate the "
               "current computational attack is infeasible within the step budget, but there is not "
               "enough evidence that the earlier plan structure or prior verified steps are unsound."),
        step=4)
    a.new_attempt()
    a.reasoner("STEP", "Partial: the 3/4 bound appears false, not merely unproved.", step=4,
               sleep=TIMEOUT, note="timeout 4 (chronic)")
    a.meta("REPLAN_DECISION", doc.replan_doc(
        "APPROVE_REPLAN",
        reason="The plan's answer-bearing target, a universal 3/4 lower bound, is false rather than "
               "merely unproved at Step 4; the target itself must be replaced.",
        plan_summary="Plan v1 was anchored on proving a universal 3/4 lower bound, treating that value "
                     "as the sharp threshold.",
        forbidden=APEX_FORBIDDEN,
        reusable=["Comb family counts a_1 = 2m+2, a_2 = m+3, a_3 = 4m (verified by script)."]),
        step=4)
    a.replanned()
    # Plan v2.
    a.reasoner("EXPLORE", doc.exploration_doc(
        "PARTIALLY_SOLVED", "A denser 4x4 motif tiled n x n has ratio 208/399 at n = 50; "
                            "candidate constant 1/2."))
    a.meta("EXPLORE_DECISION", doc.exploration_decision_doc("PROCEED_TO_PLAN", "Candidate found; plan it."))
    a.meta("PRE_PLANNING", "## Hints\n- Charge three-edge squares to neighbours (cap map).\n")
    a.reasoner("PLAN", doc.plan_doc(APEX_V2))
    a.step_ok(1, "Model fixed.", entries=[("Definition", "a_i counts squares with i boundary edges.")])
    a.step_ok(2, "Inside/outside split.")
    a.step_ok(3, "4x4 motif: a_1 = 9n, a_2 = 4n^2 - n, a_3 = 8n^2 - n.", verified=2,
              entries=[("Computation", "4x4 motif family ratio tends to 1/2.")])
    a.step_ok(4, "Cap-map argument; zero failures over 6,234 polyominoes up to size 10.", verified=1, hard=4,
              entries=APEX_CAP_LEMMAS)
    a.step_ok(5, "Pathology audit: zero bad cap targets.", verified=1)
    a.step_ok(6, "Bridged motif family S_n with ratio tending to 1/2 from above.", verified=1,
              entries=[("Computation", "S_n has (a_1,a_2,a_3) = (11n-2, 4n^2+n-2, 8n^2-3n+2), checked n = 1..40.")])
    a.step_ok(7, "Combine steps 4 and 6.", entries=[("Answer", "The largest k is 1/2.")])
    a.reasoner("SOLUTION", doc.solution_doc("a_3 <= a_1 + 2 a_2 < 2 (a_1 + a_2), and the motif family "
                                            "approaches 1/2, so k = 1/2."))
    a.review(0, doc.verdict_doc("ACCEPT"), task="SOLUTION_REVIEW")
    set_walls(a.b, total=6 * 3600)
    return a.b.build(expected={
        "outcome": "Solved",
        "plan_version": 2,
        "trace_backs": 3,
        "replans": 1,
        "failed_records": 1,
        "accepted_steps": 7,
        "pure_reasoning_used": True,
    })


# ---------------------------------------------------------------------------
# IMO 2025 Problem 6
# ---------------------------------------------------------------------------

IMO_STATEMENT = """\
Consider a 2025 x 2025 grid of unit squares. Tiles are axis-parallel grid
rectangles, pairwise disjoint. Find the minimum number of tiles such that each
row and each column has exactly one uncovered unit square.
"""

IMO_V1 = [
    "Recast the uncovered cells as a permutation.",
    "Count tiles through row segments.",
    "Bound the segments contributed by each row.",
    "Derive a linear lower bound in n.",
    "Match the bound with a construction.",
]

IMO_V2 = [
    "Recast the grid condition.",
    "Relate tile counts to corner counts.",
    "Bound corners per row pair.",
    "Search constructions to test the 2700 target.",
    "Prove the 2700 lower bound.",
    "Conclude.",
]

IMO_V3 = [
    "Recast the grid condition exactly.",
    "Replace tilings by a rectilinear-geometry invariant.",
    "Specialize good chords to permutation geometry.",
    "Translate chord selection into a bipartite matching problem.",
    "Independently search for the extremal construction.",
    "Prove the construction's upper bound geometrically.",
    "Prove the matching lower bound for every permutation.",
    "Assemble the final equality.",
]

IMO_FORBIDDEN_1 = [
    "Do not bound tiles row by row; per-row segment counts ignore shared rectangles.",
    "Do not assume the extremal permutation is the identity or a single cycle shift.",
    "Do not pursue a lower bound linear in n with slope above 1 without a small-case check.",
]

IMO_FORBIDDEN_2 = [
    "Do not attempt to prove a 2700 lower bound or any lower bound exceeding the verified "
    "2112-tile construction.",
    "Do not discard the verified 2112-tile construction.",
    "Do not re-derive tile counts from corner counts without the good-chord correction.",
]

BIJECTION = ("Lemma", "Valid configurations are in bijection with permutations pi in S_2025 via "
                      "U_pi = {(i, pi(i))}.")


def imo():
    a = Author("imo2025_6", IMO_STATEMENT)
    # Plan v1: four trace-backs, then a Verifier re-plan proposal.
    a.reasoner("EXPLORE", doc.exploration_doc("NEED_PLAN", "Small grids: 2, 4, 6 uncovered patterns."))
    a.meta("PRE_PLANNING", "## Hints\n- Reduce to permutations first.\n")
    a.reasoner("PLAN", doc.plan_doc(IMO_V1))
    a.step_ok(1, "Permutation recast.", entries=[BIJECTION])
    a.step_ok(2, "Row segment count.")
    a.reasoner("STEP", doc.report_doc("Per-row bound.", hard=2), step=3)
    a.review(3, doc.verdict_doc("TRACE_BACK", target=2, logic_gate="FAIL: step 2 double counts."))
    a.new_attempt()  # TB 1
    a.step_ok(2, "Row segment count, corrected.")
    a.reasoner("STEP", doc.report_doc("Per-row bound again.", hard=2), step=3)
    a.review(3, doc.verdict_doc("TRACE_BACK", target=3, logic_gate="FAIL: bound fails at n = 4."))
    a.new_attempt()  # TB 2
    a.step_ok(3, "Per-row bound, restricted form.", verified=1)
    a.reasoner("STEP", "Partial: linear bound search still running.", step=4, sleep=TIMEOUT)
    a.meta("INTERVENTION", doc.intervention_doc("TRACE_BACK", target=4, pure_reasoning=False,
                                                 guidance="Prove the bound by hand first."), step=4)
    a.new_attempt()  # TB 3
    a.reasoner("STEP", doc.report_doc("Linear bound derived.", hard=2), step=4)
    a.review(4, doc.verdict_doc("TRACE_BACK", target=3, logic_gate="FAIL: relies on the per-row bound."))
    a.new_attempt()  # TB 4
    a.step_ok(3, "Per-row bound, restated.")
    a.reasoner("STEP", doc.report_doc("Linear bound, second derivation.", hard=2), step=4)
    a.review(4, doc.verdict_doc("PROPOSE_REPLAN", logic_gate="FAIL: row-by-row counting cannot work."))
    a.meta("REPLAN_DECISION", doc.replan_doc(
        "APPROVE_REPLAN",
        reason="Row-by-row counting ignores rectangles spanning several rows; the plan's central "
               "inequality cannot hold.",
        plan_summary="Plan v1 bounded tiles through per-row segment counts.",
        forbidden=IMO_FORBIDDEN_1,
        reusable=["Uncovered cells form a permutation matrix (Step 1 of plan v1)."]), step=4)
    a.replanned()
    # Plan v2: the 2700 target; three trace-backs, then a plan-blocked re-plan.
    a.reasoner("EXPLORE", doc.exploration_doc("NEED_PLAN", "Corner counting looks promising."))
    a.meta("PRE_PLANNING", "## Hints\n- Count reflex corners.\n")
    a.reasoner("PLAN", doc.plan_doc(IMO_V2))
    a.step_ok(1, "Recast.", entries=[BIJECTION])
    a.step_ok(2, "Tiles vs corners.")
    a.reasoner("STEP", doc.report_doc("Corner bound per row pair.", hard=2), step=3)
    a.review(3, doc.verdict_doc("TRACE_BACK", target=2, logic_gate="FAIL: step 2 misses holes."))
    a.new_attempt()  # TB 5
    a.step_ok(2, "Tiles vs corners, with holes.")
    a.step_ok(3, "Corner bound per row pair.")
    a.step_ok(4, "Construction search found a 2112-tile configuration.", verified=3,
              entries=[("Computation", "A verified construction uses 2112 tiles.")])
    a.reasoner("STEP", doc.report_doc("The 2700 target contradicts step 4.", hard=1, plan_blocked=True), step=5)
    a.meta("REPLAN_DECISION", doc.replan_doc(
        "TRACE_BACK_TO", target=4, reason="Re-check the construction before abandoning the plan."), step=5)
    a.new_attempt()  # TB 6
    a.step_ok(4, "Construction re-verified: 2112 tiles.", verified=3,
              entries=[("Computation", "A verified construction uses 2112 tiles.")])
    a.reasoner("STEP", "Partial: attempting the 2700 bound.", step=5, sleep=TIMEOUT)
    a.meta("INTERVENTION", doc.intervention_doc("TRACE_BACK", target=5, pure_reasoning=False,
                                                 guidance="Reconcile the target with step 4."), step=5)
    a.new_attempt()  # TB 7
    a.reasoner("STEP", doc.report_doc("The 2700 bound is false.", hard=1, plan_blocked=True), step=5)
    a.meta("REPLAN_DECISION", doc.replan_doc(
        "APPROVE_REPLAN",
        reason="The current plan is unsound because its planned 2700 lower bound has been directly "
               "falsified by a verified 2112-tile construction.",
        plan_summary="Plan v2 pursued a proof of a 2700 lower bound for the tiling quantity; Step 4 "
                     "produced a verified 2112-tile construction.",
        forbidden=IMO_FORBIDDEN_2,
        reusable=["The 2112-tile construction from plan v2 step 4 (verified by script)."]), step=5)
    a.replanned()
    # Plan v3: two debates and five trace-backs.
    a.reasoner("EXPLORE", doc.exploration_doc("PARTIALLY_SOLVED", "2112 matches 2025 + 2*45 - 3."))
    a.meta("EXPLORE_DECISION", doc.exploration_decision_doc("CONTINUE_EXPLORATION"))
    a.reasoner("EXPLORE", doc.exploration_doc("NEED_PLAN", "Good chords and matchings look relevant."))
    a.meta("PRE_PLANNING", "## Hints\n- Konig's theorem on the chord incompatibility graph.\n")
    a.reasoner("PLAN", doc.plan_doc(IMO_V3))
    a.step_ok(1, "Uncovered set is a permutation.", entries=[BIJECTION])
    a.reasoner("STEP", doc.report_doc("T(pi) = r/2 + h + 1 - nu.", hard=2), step=2)
    a.review(2, doc.verdict_doc("CHALLENGE", objections="n = 3 identity: formula gives 3, true count 4."))
    a.reasoner("DEFEND", doc.report_doc("Revised: T = r + c - h - nu.", hard=2), step=2)
    a.re_review(2, doc.verdict_doc("CHALLENGE", objections="Define c precisely."))
    a.reasoner("DEFEND", doc.report_doc("c counts covered connected components.", hard=2, verified=1), step=2)
    a.re_review(2, doc.verdict_doc("ACCEPT", entries=[("Lemma", "T(pi) = r(pi) + c(pi) - h(pi) - nu(pi).")]))
    chords = [("Computation", "The chord classification holds for all permutations with n = 2..6.")]
    a.step_ok(3, "Chord criterion.", verified=1, entries=chords)
    a.reasoner("STEP", doc.report_doc("Konig reduction.", hard=2), step=4)
    a.review(4, doc.verdict_doc("TRACE_BACK", target=3, logic_gate="FAIL: vertical chords omitted."))
    a.new_attempt()  # TB 8
    a.step_ok(3, "Chord criterion, both orientations.", verified=1, entries=chords)
    matching = [("Computation", "The bipartite matching formula holds for n = 2..7.")]
    a.step_ok(4, "T = n + a + mu - 1.", verified=1, entries=matching)
    a.reasoner("STEP", doc.report_doc("A 2112-tile construction exists.", hard=1), step=5)
    a.review(5, doc.verdict_doc("CHALLENGE", objections="Give the explicit permutation and script output."))
    construction = [("Computation", "The number of rectangles is 4(m-1) + (m-1)^2 = 2112 for m = 45.")]
    a.reasoner("DEFEND", doc.report_doc("pi(am+i+1) = im + (45-a); script confirms.", verified=2), step=5)
    a.re_review(5, doc.verdict_doc("ACCEPT", entries=construction))
    a.reasoner("STEP", "Partial: enumerating rectangles.", step=6, sleep=TIMEOUT)
    a.meta("INTERVENTION", doc.intervention_doc("TRACE_BACK", target=6, pure_reasoning=False,
                                                 guidance="Enumerate by family, not by cell."), step=6)
    a.new_attempt()  # TB 9
    rects = [("Computation", "rectangles=2112, covered=4098600, expected_covered=4098600.")]
    a.step_ok(6, "Rectangles enumerated by family.", verified=2, entries=rects)
    a.reasoner("STEP", doc.report_doc("Vertex-cover slicing.", hard=3), step=7)
    a.review(7, doc.verdict_doc("TRACE_BACK", target=5, logic_gate="FAIL: step 5 boundary family miscounted."))
    a.new_attempt()  # TB 10
    a.step_ok(5, "Construction with corrected boundary families.", verified=2, entries=construction)
    a.step_ok(6, "Rectangles re-enumerated.", verified=2, entries=rects)
    a.reasoner("STEP", doc.report_doc("Zone argument.", hard=3), step=7)
    a.review(7, doc.verdict_doc("TRACE_BACK", target=7, logic_gate="FAIL: zone count off by one."))
    a.new_attempt()  # TB 11
    a.reasoner("STEP", doc.report_doc("Zone argument, corrected.", hard=3), step=7)
    a.review(7, doc.verdict_doc("TRACE_BACK", target=6, logic_gate="FAIL: step 6 script covers a different grid."))
    a.new_attempt()  # TB 12
    a.step_ok(6, "Rectangles for the 2025 grid.", verified=2, entries=rects)
    a.step_ok(7, "a + x + y >= 2 sqrt(n) - 2, so T >= 2112.", verified=3, hard=2,
              entries=[("Lemma", "For every pi in S_2025, T(pi) >= 2112.")])
    a.step_ok(8, "Equality.", entries=[("Answer", "The minimum number of rectangular tiles Matilda needs is 2112.")])
    a.reasoner("SOLUTION", doc.solution_doc("Construction gives 2112; the matching bound gives T >= 2112."))
    a.review(0, doc.verdict_doc("ACCEPT"), task="SOLUTION_REVIEW")
    set_walls(a.b, total=8 * 3600 + 18 * 60)
    return a.b.build(expected={
        "outcome": "Solved",
        "plan_version": 3,
        "trace_backs": 12,
        "replans": 2,
        "failed_records": 2,
        "accepted_steps": 8,
    })


def exploration_solved():
    a = Author("early_solve", "Compute 2 + 2.\n")
    a.reasoner("EXPLORE", doc.exploration_doc("SOLVED", "2 + 2 = 4 by direct evaluation."))
    a.review(0, doc.verdict_doc("ACCEPT"), task="EXPLORE_REVIEW")
    set_walls(a.b, total=600)
    return a.b.build(expected={
        "outcome": "Solved",
        "plan_version": 1,
        "trace_backs": 0,
        "replans": 0,
        "solved_in_exploration": True,
    })


SCRIPTS = {
    "apex2025_2.yaml": apex,
    "imo2025_6.yaml": imo,
    "exploration_solved.yaml": exploration_solved,
}


def main(out: Path = OUT) -> None:
    out.mkdir(parents=True, exist_ok=True)
    for name, build in SCRIPTS.items():
        build().dump(out / name)
        print(f"wrote {out / name}")


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else OUT)
