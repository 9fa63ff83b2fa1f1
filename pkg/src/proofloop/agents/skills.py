"""Skill registry: Markdown protocol files with a YAML preamble."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import yaml

from ..errors import SkillNotFoundError

SKILL_NAMES = (
    "exploration-protocol",
    "verifier-review-protocol",
    "verification-tag-protocol",
    "meta-intervention-protocol",
    "math-solving-strategies",
    "construct-counterexamples",
    "code-issue-resolution",
)


@dataclass(frozen=True)
class Skill:
    name: str
    preamble: dict[str, str]
    body: str


def parse_skill(name: str, text: str) -> Skill:
    if not text.startswith("---"):
        return Skill(name, {}, text)
    _, head, body = text.split("---", 2)
    meta = yaml.safe_load(head) or {}
    if not isinstance(meta, dict) or any(isinstance(v, (dict, list)) for v in meta.values()):
        raise ValueError(f"skill {name}: preamble must be flat key-value pairs")
    return Skill(name, {str(k): str(v) for k, v in meta.items()}, body.lstrip("\n"))


def default_registry_dir() -> Path:
    return Path(str(resources.files("proofloop.data").joinpath("skills")))


class SkillRegistry:
    """Loads each skill at most once."""

    def __init__(self, directory: str | Path | None = None):
        self.directory = Path(directory) if directory else default_registry_dir()
        self._cache: dict[str, Skill] = {}
        self.reads = 0

    def load(self, name: str) -> Skill:
        if name in self._cache:
            return self._cache[name]
        if name not in SKILL_NAMES:
            raise SkillNotFoundError(f"unknown skill {name!r}")
        path = self.directory / f"{name}.md"
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise SkillNotFoundError(f"cannot read skill {name!r} at {path}: {exc}") from exc
        self.reads += 1
        skill = self._cache[name] = parse_skill(name, text)
        return skill


_registries: dict[Path, SkillRegistry] = {}


def load_skill(registry_dir: str | Path | None, name: str) -> Skill:
    key = Path(registry_dir) if registry_dir else default_registry_dir()
    reg = _registries.setdefault(key, SkillRegistry(key))
    return reg.load(name)
