"""Benchmarks package."""

from .generators import FAMILIES, cycle, debruijn, gen, random_eulerian, random_rhs, torus_flow
from .suites import SUITES, BenchCase, get_suite, measured_error, run_case, run_suite

__all__ = [
    "FAMILIES",
    "SUITES",
    "BenchCase",
    "cycle",
    "debruijn",
    "gen",
    "get_suite",
    "measured_error",
    "random_eulerian",
    "random_rhs",
    "run_case",
    "run_suite",
    "torus_flow",
]
