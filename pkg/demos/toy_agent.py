"""A stand-in agent CLI for the process backend.

It reads the prompt file, looks at the ``Task:`` line and prints a
well-formed document for that task. The Verifier challenges step 2 once so
the debate path runs. Wire it up with ``toy_agent.yaml``.
"""

import re
import sys

from proofloop.protocol import documents as doc


def answer(prompt: str) -> str:
    m = re.search(r"^Task: (\w+)", prompt, re.M)
    task, instruction = m.group(1), prompt[m.end():]
    step = re.search(r"step (\d+)", instruction)
    step = int(step.group(1)) if step else 0
    if task == "EXPLORE":
        return doc.exploration_doc("NEED_PLAN", "Small cases agree with the claim; no proof yet.")
    if task == "PRE_PLANNING":
        return "Induct on n; check the base case by hand."
    if task == "PLAN":
        return doc.plan_doc(["Check the base case.", "Prove the inductive step."])
    if task in ("STEP", "DEFEND"):
        return doc.report_doc(f"Argument for step {step}.", verified=1, hard=1)
    if task == "REVIEW" and step == 2:
        return doc.verdict_doc("CHALLENGE", objections="The inductive hypothesis is used for n+1.")
    if task in ("REVIEW", "RE_REVIEW"):
        return doc.verdict_doc("ACCEPT", entries=[("Lemma", f"Step {step} holds.")])
    if task == "SOLUTION":
        return doc.solution_doc("Base case, then induction.")
    if task in ("SOLUTION_REVIEW", "EXPLORE_REVIEW", "SOLUTION_META_REVIEW"):
        return doc.verdict_doc("ACCEPT")
    return doc.replan_doc("ABORT", f"The toy agent has no answer for {task}.")


if __name__ == "__main__":
    session_flag, session, agent, prompt_file = sys.argv[1:5]
    with open(prompt_file, encoding="utf-8") as fh:
        print(answer(fh.read()))
