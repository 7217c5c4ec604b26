"""Hybrid planner and simulator for Angry Birds style levels."""

from ._core import (
    DomainError,
    EngineError,
    GenerationError,
    HybridProblem,
    InputError,
    Level,
    MaterialTable,
    agent,
    approx_cos,
    approx_sin,
    cascade,
    elastic_bird_velocity,
    execute,
    generate_level,
    oracle_hit,
    parse_level,
    run_benchmark,
    serialize_level,
    single_shot,
    solve,
    strip_blocks,
    translate,
)

__all__ = [
    "DomainError",
    "EngineError",
    "GenerationError",
    "HybridProblem",
    "InputError",
    "Level",
    "MaterialTable",
    "agent",
    "approx_cos",
    "approx_sin",
    "cascade",
    "elastic_bird_velocity",
    "execute",
    "generate_level",
    "oracle_hit",
    "parse_level",
    "run_benchmark",
    "serialize_level",
    "single_shot",
    "solve",
    "strip_blocks",
    "translate",
]

__version__ = getattr(__import__("abplan._core", fromlist=["__version__"]), "__version__", "dev")
