"""Run seeded stochastic cohorts for each bundled profile and print the
three statistics tables side by side.

    python3 demos/simulate_cohorts.py [runs-per-profile]
"""

import sys
import tempfile
from importlib import resources

from proofloop import runner
from proofloop.agents import BehaviorProfile
from proofloop.stats import aggregate, render_tables


def main() -> None:
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 100
    fixtures = resources.files("proofloop") / "fixtures"
    named = []
    with tempfile.TemporaryDirectory(prefix="proofloop-sim-") as workdir:
        for name in ("easy", "quiet", "default", "harsh"):
            profile = BehaviorProfile.load(str(fixtures / f"profile_{name}.yaml"))
            runs = runner.simulate(profile, n, seed=0, workdir=f"{workdir}/{name}", problems=max(1, n // 4))
            agg = aggregate(runs)
            print(f"{name:8s} {agg.process_summary()}  ({agg.tags.summary()})")
            named.append((name, agg))
    print()
    print(render_tables(named, sep=" | "))


if __name__ == "__main__":
    main()
