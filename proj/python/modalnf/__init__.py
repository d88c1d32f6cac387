"""Exact normal forms for diagonal-linear modal ODE systems."""

from ._modalnf import (
    ModalnfError,
    ParseError,
    Problem,
    Transform,
    load_problem,
    parse_problem,
    transform,
)

__all__ = [
    "ModalnfError",
    "ParseError",
    "Problem",
    "Transform",
    "load_problem",
    "parse_problem",
    "transform",
]
