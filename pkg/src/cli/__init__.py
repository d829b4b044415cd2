"""Command-line surface: gen, build, solve, validate and bench."""

from .commands import RunConfig, cmd_bench, cmd_build, cmd_gen, cmd_solve, cmd_validate, load_laplacian
from .main import build_parser, main

__all__ = [
    "RunConfig",
    "build_parser",
    "cmd_bench",
    "cmd_build",
    "cmd_gen",
    "cmd_solve",
    "cmd_validate",
    "load_laplacian",
    "main",
]
