"""Turing-style A-type Boolean networks and evolutionary search for them."""

from .graph import AType, ATypeGraph, GenConfig, GenerationError, NodeKind, Violation, random_atype, validate
from .sim import estimate_delay_range, is_clampable, run, run_clamped, simulate
from .textio import ParseError, parse, serialize

__version__ = "0.1.0"

__all__ = [
    "AType",
    "ATypeGraph",
    "GenConfig",
    "GenerationError",
    "NodeKind",
    "ParseError",
    "Violation",
    "estimate_delay_range",
    "is_clampable",
    "parse",
    "random_atype",
    "run",
    "run_clamped",
    "serialize",
    "simulate",
    "validate",
]
