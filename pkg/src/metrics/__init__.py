"""Metrics package."""

from .reporter import (
    generate_markdown_report,
    load_and_report,
    print_bench_report,
    print_chain_report,
    print_solve_report,
)
from .tracker import CSV_COLUMNS, BenchRecord, BenchResults

__all__ = [
    "CSV_COLUMNS",
    "BenchRecord",
    "BenchResults",
    "generate_markdown_report",
    "load_and_report",
    "print_bench_report",
    "print_chain_report",
    "print_solve_report",
]
