"""Agent roles, session naming, dispatch, and the pluggable backends."""

from ..naming import session_name
from ..types import AgentRole
from .base import (
    AgentRequest,
    AgentResponse,
    Backend,
    RealClock,
    SessionDirective,
    SessionMode,
    SimulatedClock,
    dispatch,
    simulated_duration,
)
from .process import CommandTemplate, ProcessBackend
from .scripted import Script, ScriptBuilder, ScriptedBackend, ScriptEntry
from .skills import SKILL_NAMES, Skill, SkillRegistry, load_skill
from .stochastic import BehaviorProfile, StochasticBackend

__all__ = [
    "AgentRequest",
    "AgentResponse",
    "AgentRole",
    "Backend",
    "BehaviorProfile",
    "CommandTemplate",
    "ProcessBackend",
    "RealClock",
    "SKILL_NAMES",
    "Script",
    "ScriptBuilder",
    "ScriptEntry",
    "ScriptedBackend",
    "SessionDirective",
    "SessionMode",
    "SimulatedClock",
    "Skill",
    "SkillRegistry",
    "StochasticBackend",
    "dispatch",
    "load_skill",
    "session_name",
    "simulated_duration",
]
