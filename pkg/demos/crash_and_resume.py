"""Kill a replay part-way through, resume it from disk, and compare the
result with an uninterrupted run.

    python3 demos/crash_and_resume.py [checkpoint]
"""

import sys
import tempfile
from importlib import resources

from proofloop import runner
from proofloop.agents import Script
from proofloop.state import Workspace, load


class PowerCut(Exception):
    pass


def main() -> None:
    k = int(sys.argv[1]) if len(sys.argv) > 1 else 20
    script = Script.load(str(resources.files("proofloop") / "fixtures" / "apex2025_2.yaml"))
    with tempfile.TemporaryDirectory(prefix="proofloop-resume-") as tmp:
        ref, _ = runner.replay(script, f"{tmp}/ref")

        def cut(state, n):
            if n == k:
                raise PowerCut(f"stopped after checkpoint {n}, stage {state.stage!r}, step {state.current_step}")

        try:
            runner.replay(script, f"{tmp}/crash", on_checkpoint=cut)
        except PowerCut as exc:
            print(exc)
        ws = Workspace.for_problem(f"{tmp}/crash", script.problem_id)
        done = len(load(ws.path).stats.invocations)
        print(f"{done} of {len(script.entries)} agent calls were on disk; resuming")
        resumed, _ = runner.resume_replay(script, ws.path)
        print("uninterrupted:", runner.summary_line(ref.final_state))
        print("resumed:      ", runner.summary_line(resumed.final_state))
        same_log = ws.events_log.read_text() == Workspace(ref.final_state.workspace).events_log.read_text()
        same_state = resumed.final_state.to_dict() == ref.final_state.to_dict()
        print(f"identical event log: {same_log}; identical final state: {same_state}")


if __name__ == "__main__":
    main()
