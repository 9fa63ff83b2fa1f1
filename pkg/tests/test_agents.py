import sys

import pytest
from hypothesis import given, strategies as st

from conftest import profile
from proofloop.agents import (
    SKILL_NAMES,
    AgentRequest,
    AgentRole,
    BehaviorProfile,
    CommandTemplate,
    ProcessBackend,
    ScriptBuilder,
    ScriptedBackend,
    SessionDirective,
    SimulatedClock,
    SkillRegistry,
    StochasticBackend,
    dispatch,
    session_name,
    simulated_duration,
)
from proofloop.agents.skills import parse_skill
from proofloop.errors import ScriptDivergence, SkillNotFoundError, UnsafeIdentifierError
from proofloop.protocol import parse_exploration, parse_verdict
from proofloop.protocol.instructions import Task
from proofloop.stats import RunStats


def request(role=AgentRole.REASONER, mode="fresh", name="reason-p-a1", task="EXPLORE", step=None,
            budget=600.0, grace=5.0, instruction="Explore.") -> AgentRequest:
    directive = getattr(SessionDirective, mode)(name)
    return AgentRequest(role, directive, "[live]\n", instruction, budget, grace, task=task, step=step)


# -- session names -------------------------------------------------------------


def test_session_names():
    assert session_name(AgentRole.REASONER, "p", attempt=3) == "reason-p-a3"
    assert session_name(AgentRole.REASONER_NON_CODING, "p", attempt=1) == "reason-p-a1"
    assert session_name(AgentRole.VERIFIER, "p", step=4) == "verify-p-step04"
    assert session_name(AgentRole.VERIFIER, "p", step=0) == "verify-p-step00"
    assert session_name(AgentRole.VERIFIER, "p", step=12, recreation=2) == "verify-p-step12-r2"
    assert session_name(AgentRole.META, "p") == "meta-p"


def test_session_name_validation():
    with pytest.raises(ValueError):
        session_name(AgentRole.REASONER, "p")
    with pytest.raises(ValueError):
        session_name(AgentRole.VERIFIER, "p")
    with pytest.raises(UnsafeIdentifierError):
        session_name(AgentRole.META, "p q")


@given(st.from_regex(r"[A-Za-z0-9_-]{1,20}", fullmatch=True), st.integers(1, 50), st.integers(0, 99))
def test_session_names_are_distinct_across_roles(pid, attempt, step):
    names = {
        session_name(AgentRole.REASONER, pid, attempt=attempt),
        session_name(AgentRole.VERIFIER, pid, step=step),
        session_name(AgentRole.META, pid),
    }
    assert len(names) == 3


# -- dispatch timing -------------------------------------------------------------


@pytest.mark.parametrize("sleep, ignores, wall, timed_out", [
    (10.0, False, 10.0, False),
    (600.0, False, 600.0, False),
    (900.0, False, 600.0, True),
    (900.0, True, 605.0, True),
])
def test_simulated_duration(sleep, ignores, wall, timed_out):
    assert simulated_duration(sleep, 600.0, 5.0, ignores) == (wall, timed_out)


class Slow:
    def call(self, req, clock):
        from proofloop.agents import AgentResponse
        return AgentResponse("late", 10_000.0)


def test_dispatch_clamps_runaway_backends_and_records_stats():
    clock, stats = SimulatedClock(), RunStats()
    resp = dispatch(Slow(), request(), clock, stats)
    assert resp.timed_out and resp.wall_seconds == 605.0
    assert clock.now() == 605.0
    assert stats.invocations[0].timed_out and stats.invocations[0].session == "reason-p-a1"


# -- scripted backend ----------------------------------------------------------------


def _script():
    return (ScriptBuilder("p", "s")
            .add("Reasoner", "Fresh", "first", task="EXPLORE", session="reason-p-a1", sleep=30)
            .add("Verifier", "Fresh", "second", task="REVIEW", step=1, contains="Review step 1")
            .build())


def test_scripted_backend_replays_in_order():
    b, clock = ScriptedBackend(_script()), SimulatedClock()
    r1 = b.call(request(), clock)
    assert (r1.raw_output, r1.wall_seconds, r1.timed_out) == ("first", 30.0, False)
    r2 = b.call(request(AgentRole.VERIFIER, name="verify-p-step01", task="REVIEW", step=1,
                        instruction="Review step 1 now."), clock)
    assert r2.raw_output == "second" and b.remaining == 0


@pytest.mark.parametrize("field, req", [
    ("role", request(AgentRole.META, name="reason-p-a1")),
    ("session_mode", request(mode="resume")),
    ("session_name", request(name="reason-p-a2")),
    ("task", request(task="PLAN")),
])
def test_scripted_backend_divergence_names_the_field(field, req):
    with pytest.raises(ScriptDivergence) as info:
        ScriptedBackend(_script()).call(req, SimulatedClock())
    assert info.value.field == field and info.value.index == 0


def test_scripted_backend_instruction_divergence():
    b = ScriptedBackend(_script(), start=1)
    with pytest.raises(ScriptDivergence) as info:
        b.call(request(AgentRole.VERIFIER, task="REVIEW", step=1, instruction="other"), SimulatedClock())
    assert info.value.field == "instruction_contains"


def test_scripted_backend_exhaustion():
    b = ScriptedBackend(_script(), start=2)
    with pytest.raises(ScriptDivergence) as info:
        b.call(request(), SimulatedClock())
    assert info.value.field == "Exhausted"


def test_script_yaml_round_trip(tmp_path):
    s = _script()
    s.dump(tmp_path / "s.yaml")
    assert ScriptedBackend.from_file(tmp_path / "s.yaml").entries == s.entries


def test_script_entry_requires_role_and_mode():
    from proofloop.agents import ScriptEntry
    with pytest.raises(ValueError):
        ScriptEntry({"role": "Reasoner"}, "x")
    with pytest.raises(ValueError):
        ScriptEntry({"role": "Reasoner", "session_mode": "Fresh", "colour": 1}, "x")


# -- stochastic backend ----------------------------------------------------------------


def _drive(backend, n=50):
    out = []
    clock = SimulatedClock()
    for i in range(n):
        task = [Task.EXPLORE, Task.REVIEW][i % 2]
        role = AgentRole.REASONER if task is Task.EXPLORE else AgentRole.VERIFIER
        r = backend.call(request(role, task=task.value, step=1 if task is Task.REVIEW else None), clock)
        out.append((r.raw_output, r.wall_seconds, r.timed_out))
    return out


def test_stochastic_backend_is_seed_deterministic():
    p = profile("default")
    assert _drive(StochasticBackend(p, seed=7)) == _drive(StochasticBackend(p, seed=7))
    assert _drive(StochasticBackend(p, seed=7)) != _drive(StochasticBackend(p, seed=8))


def test_stochastic_output_parses():
    b = StochasticBackend(profile("default"), seed=1)
    for text, _, _ in _drive(b, 40)[::2]:
        parse_exploration(text)
    for text, _, timed_out in _drive(b, 40)[1::2]:
        if not timed_out:
            parse_verdict(text, 1)


def test_easy_profile_always_solves_in_exploration():
    b = StochasticBackend(profile("easy"), seed=3)
    for text, _, timed_out in _drive(b, 20)[::2]:
        assert not timed_out and parse_exploration(text).assessment.value == "SOLVED"


def test_profile_rejects_bad_values():
    with pytest.raises(ValueError):
        BehaviorProfile(step_challenge=1.5)
    with pytest.raises(ValueError):
        BehaviorProfile(plan_steps=(5, 2))
    with pytest.raises(ValueError):
        BehaviorProfile.from_dict({"nonsense": 1})


# -- skills ----------------------------------------------------------------


def test_bundled_skills_load_once():
    reg = SkillRegistry()
    for name in SKILL_NAMES:
        skill = reg.load(name)
        assert skill.body.strip()
        reg.load(name)
    assert reg.reads == len(SKILL_NAMES)


def test_unknown_or_missing_skill(tmp_path):
    with pytest.raises(SkillNotFoundError):
        SkillRegistry().load("no-such-skill")
    with pytest.raises(SkillNotFoundError):
        SkillRegistry(tmp_path).load(SKILL_NAMES[0])


def test_skill_preamble():
    s = parse_skill("x", "---\nname: x\nwhen: always\n---\n\nBody.\n")
    assert s.preamble == {"name": "x", "when": "always"} and s.body == "Body.\n"
    with pytest.raises(ValueError):
        parse_skill("x", "---\nname: [a, b]\n---\nBody")


# -- process backend ----------------------------------------------------------------


def _template(code: str) -> CommandTemplate:
    return CommandTemplate([sys.executable, "-c", code, "{session_flag}", "{session}", "{prompt_file}"])


def test_process_backend_passes_session_and_prompt():
    code = "import sys; print(sys.argv[1], sys.argv[2]); print(open(sys.argv[3]).read())"
    r = ProcessBackend(_template(code)).call(request(mode="resume"), SimulatedClock())
    assert not r.timed_out and r.exit_status == 0
    assert r.raw_output.startswith("--resume reason-p-a1\n[live]\n")
    assert "Explore." in r.raw_output


def test_process_backend_times_out_and_stops_the_agent():
    r = ProcessBackend(_template("import time; time.sleep(30)")).call(
        request(budget=0.3, grace=0.5), SimulatedClock())
    assert r.timed_out and r.wall_seconds < 5


def test_process_backend_kills_agents_that_ignore_the_stop():
    code = "import signal, time; signal.signal(signal.SIGTERM, signal.SIG_IGN); time.sleep(30)"
    r = ProcessBackend(_template(code)).call(request(budget=0.3, grace=0.3), SimulatedClock())
    assert r.timed_out and r.wall_seconds < 5


def test_command_template_needs_command(tmp_path):
    (tmp_path / "t.yaml").write_text("fresh_flag: --new\n")
    with pytest.raises(ValueError):
        CommandTemplate.load(tmp_path / "t.yaml")
