"""Replay the two bundled case-study scripts and narrate what happened.

    python3 demos/replay_case_studies.py [workdir]
"""

import sys
import tempfile
from importlib import resources

from proofloop import runner
from proofloop.events import EventKind, read_events
from proofloop.state import Workspace


def narrate(name: str, workdir: str) -> None:
    script = resources.files("proofloop") / "fixtures" / f"{name}.yaml"
    outcome, _ = runner.replay(str(script), workdir, overwrite=True)
    state = outcome.final_state
    print(f"== {state.problem_id}: {runner.summary_line(state)}")
    print(f"   simulated wall clock {state.clock_seconds / 3600:.2f} h over "
          f"{len(state.stats.invocations)} agent calls")
    events, _ = read_events(Workspace(state.workspace).events_log)
    for e in events:
        p = e.payload
        if e.kind is EventKind.TIMEOUT:
            print(f"   step {p['step']} timed out ({p['consecutive']} in a row)")
        elif e.kind is EventKind.PURE_REASONING_ON:
            print(f"   pure-reasoning mode switched on at step {p['step']}")
        elif e.kind is EventKind.TRACE_BACK:
            print(f"   trace-back {p['from']} -> {p['to']} ({p['source']}), Reasoner attempt a{p['attempt']}")
        elif e.kind is EventKind.STALEMATE:
            print(f"   stalemate on step {p['step']} after {p['rounds']} rounds")
        elif e.kind is EventKind.REPLAN_DECIDED and p.get("applied"):
            print(f"   re-plan approved with {p['forbidden']} forbidden directions")
        elif e.kind is EventKind.SOLVED:
            print(f"   solved via {p['via']} on plan v{p['plan_version']}")
    for rec in state.failed_records:
        print(f"   plan v{rec.plan_version_abandoned} failed ({rec.trigger}); first forbidden direction:")
        print(f"     {rec.forbidden_directions[0]}")
    print()


def main() -> None:
    workdir = sys.argv[1] if len(sys.argv) > 1 else tempfile.mkdtemp(prefix="proofloop-demo-")
    for name in ("exploration_solved", "apex2025_2", "imo2025_6"):
        narrate(name, workdir)
    print(f"workspaces are under {workdir}/scratch; try `proofloop inspect {workdir}/scratch/imo2025_6`")


if __name__ == "__main__":
    main()
