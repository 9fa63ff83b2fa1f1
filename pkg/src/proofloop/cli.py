"""Command-line entry point.

Exit status: 0 solved, 2 usage error, 3 aborted, 4 internal error,
5 replay divergence or expected-outcome mismatch.
"""

from __future__ import annotations

import argparse
import dataclasses
import glob
import json
import logging
import sys
from pathlib import Path

from . import runner
from .agents import BehaviorProfile, Script
from .config import Budgets, Config, load_config
from .errors import ProofloopError, ScriptDivergence, WorkspaceExistsError
from .orchestrator import run_problem
from .state import Workspace, load, render_canonical
from .stats import aggregate, render_tables, wallclock_distribution
from .types import Outcome

EXIT_SOLVED = 0
EXIT_USAGE = 2
EXIT_ABORTED = 3
EXIT_INTERNAL = 4
EXIT_DIVERGED = 5

_SCALARS = (int, float, bool, "int", "float", "bool")


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("config overrides")
    for f in dataclasses.fields(Config):
        flag = "--" + f.name.replace("_", "-")
        if f.name == "budgets":
            for b in dataclasses.fields(Budgets):
                g.add_argument(f"--budget-{b.name.replace('_', '-')}", dest=f"budget_{b.name}", type=float,
                               metavar="SEC")
        elif f.name == "recommended_steps":
            g.add_argument(flag, dest=f.name, type=int, nargs=2, metavar=("LO", "HI"))
        elif f.type in (bool, "bool"):
            g.add_argument(flag, dest=f.name, action=argparse.BooleanOptionalAction, default=None)
        elif f.type in _SCALARS:
            g.add_argument(flag, dest=f.name, type=float if "float" in str(f.type) else int)


def _config_from(args, base: Config) -> Config:
    changes = {}
    for f in dataclasses.fields(Config):
        if f.name == "budgets":
            budgets = dataclasses.replace(base.budgets, **{
                b.name: getattr(args, f"budget_{b.name}")
                for b in dataclasses.fields(Budgets)
                if getattr(args, f"budget_{b.name}", None) is not None
            })
            changes["budgets"] = budgets
        elif getattr(args, f.name, None) is not None:
            changes[f.name] = getattr(args, f.name)
    return base.replace(**changes)


def _outcome_code(outcome: Outcome) -> int:
    return EXIT_SOLVED if outcome is Outcome.SOLVED else EXIT_ABORTED


def cmd_run(args) -> int:
    problem = Path(args.problem)
    config = _config_from(args, load_config(args.config))
    problem_id = args.id or problem.stem
    state = runner.start(problem_id, problem.read_text(encoding="utf-8"), config, args.workdir,
                         backend_spec=args.backend, overwrite=args.overwrite)
    result = run_problem(config, runner.make_backend(args.backend), state)
    print(runner.summary_line(result.final_state))
    return _outcome_code(result.status)


def cmd_resume(args) -> int:
    ws = Workspace(args.workspace)
    spec = args.backend
    if spec is None:
        run_file = ws / "run.json"
        if not run_file.exists():
            print("error: no --backend given and no run.json in the workspace", file=sys.stderr)
            return EXIT_USAGE
        spec = json.loads(run_file.read_text())["backend"]
    state = load(ws.path)
    if state.outcome is not Outcome.IN_PROGRESS:
        print(runner.summary_line(state))
        return _outcome_code(state.outcome)
    config = _config_from(args, runner.workspace_config(ws.path))
    result = run_problem(config, runner.make_backend(spec, state), state)
    print(runner.summary_line(result.final_state))
    return _outcome_code(result.status)


def cmd_replay(args) -> int:
    script = Script.load(args.script)
    config = _config_from(args, Config.from_dict(script.config))
    try:
        result, backend = runner.replay(script, args.workdir, overwrite=args.overwrite, config=config)
    except ScriptDivergence as exc:
        print(f"divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    state = result.final_state
    print(runner.summary_line(state))
    expected = dict(script.expected)
    if args.expect:
        expected.update(json.loads(Path(args.expect).read_text()))
    problems = runner.mismatches(state, expected)
    if backend.remaining:
        problems.append(f"{backend.remaining} script entries were never consumed")
    for line in problems:
        print(f"mismatch: {line}", file=sys.stderr)
    return EXIT_DIVERGED if problems else _outcome_code(result.status)


def cmd_simulate(args) -> int:
    profile = BehaviorProfile.load(args.profile)
    config = _config_from(args, load_config(args.config))
    runs = runner.simulate(profile, args.n, args.seed, args.workdir, config, workers=args.workers,
                           problems=args.problems)
    agg = aggregate(runs)
    text = agg.process_summary() + "\n\n" + render_tables([(args.name, agg)])
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return 0


def cmd_inspect(args) -> int:
    state = load(args.workspace, repair=False)
    sys.stdout.write(render_canonical(state))
    return 0


def cmd_stats(args) -> int:
    paths = sorted({p for pattern in args.workspaces for p in glob.glob(pattern)})
    runs = runner.collect_workspaces(paths)
    if not runs:
        print("error: no workspaces matched", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(render_tables([(args.name, aggregate(runs))], sep=args.sep))
    if args.wallclock:
        Path(args.wallclock).write_text(wallclock_distribution(runs), encoding="utf-8")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="proofloop", description=__doc__.splitlines()[0])
    parser.add_argument("--workdir", default=".", help="base directory for scratch/ workspaces")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="solve a problem with a chosen backend")
    p.add_argument("problem", help="problem statement file")
    p.add_argument("--backend", required=True, help="scripted:<path>, stochastic:<path> or process:<template>")
    p.add_argument("--config", help="YAML config file")
    p.add_argument("--id", help="problem id (default: file stem)")
    p.add_argument("--overwrite", action="store_true", help="replace an existing workspace")
    _add_config_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("resume", help="continue an interrupted run")
    p.add_argument("workspace")
    p.add_argument("--backend", help="defaults to the spec recorded at run time")
    _add_config_flags(p)
    p.set_defaults(func=cmd_resume)

    p = sub.add_parser("replay", help="run a golden script and check its expected outcome")
    p.add_argument("script")
    p.add_argument("--expect", help="JSON file with expected outcome fields")
    p.add_argument("--overwrite", action="store_true")
    _add_config_flags(p)
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("simulate", help="run a seeded stochastic cohort")
    p.add_argument("profile", help="YAML behaviour profile")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--problems", type=int, help="distinct problem ids (default: one per run)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--name", default="simulated", help="benchmark label in the tables")
    p.add_argument("--config", help="YAML config file")
    p.add_argument("--out", help="also write the aggregate here")
    _add_config_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("inspect", help="print a workspace's canonical state document")
    p.add_argument("workspace")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("stats", help="aggregate finished workspaces")
    p.add_argument("workspaces", nargs="+", help="workspace paths or globs")
    p.add_argument("--name", default="benchmark")
    p.add_argument("--sep", default="\t")
    p.add_argument("--wallclock", help="write per-problem wall-clock CSV here")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except WorkspaceExistsError as exc:
        print(f"error: {exc} (use --overwrite)", file=sys.stderr)
        return EXIT_USAGE
    except (ProofloopError, OSError, ValueError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
