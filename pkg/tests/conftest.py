from pathlib import Path

import pytest
import yaml

import proofloop
from proofloop.agents import BehaviorProfile, Script
from proofloop.config import Config

PACKAGE_FIXTURES = Path(proofloop.__file__).parent / "fixtures"
TEST_FIXTURES = Path(__file__).parent / "fixtures"


def golden(name: str) -> Script:
    return Script.load(PACKAGE_FIXTURES / f"{name}.yaml")


def profile(name: str, **overrides) -> BehaviorProfile:
    p = BehaviorProfile.load(PACKAGE_FIXTURES / f"profile_{name}.yaml")
    return BehaviorProfile.from_dict({**p.to_dict(), **overrides})


def corpus() -> dict:
    return yaml.safe_load((TEST_FIXTURES / "corpus.yaml").read_text(encoding="utf-8"))


@pytest.fixture
def sim_config() -> Config:
    return Config(simulated_clock=True, fsync=False)
