"""Rich tables and markdown summaries for chain, solve and bench reports."""

from __future__ import annotations

import math
from pathlib import Path
from typing import TYPE_CHECKING

from rich.console import Console
from rich.table import Table

from .tracker import BenchResults

if TYPE_CHECKING:
    from ..chain import ChainReport
    from ..solver import SolveReport


def _fmt(value: float | None, fmt: str = ".3e") -> str:
    if value is None:
        return "-"
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    return f"{value:{fmt}}"


def _status(ok: bool | None) -> str:
    if ok is None:
        return "[dim]-[/dim]"
    return "[green]✓[/green]" if ok else "[red]✗[/red]"


def print_chain_report(report: ChainReport, console: Console | None = None) -> None:
    """Print the condition checks and per-level measurements of a chain."""
    console = console or Console()

    console.print()
    console.print(f"[bold blue]Schur complement chain[/bold blue]  n={report.n} depth={report.depth}")
    console.print(
        f"alpha={report.alpha} beta={report.beta:.4f} delta={report.delta} "
        f"nnz={report.total_nnz} (soft budget {report.nnz_budget:.0f})"
    )

    checks = Table(title="Conditions")
    checks.add_column("Condition", style="cyan")
    checks.add_column("Status", justify="center")
    for name, ok in report.conditions.items():
        checks.add_row(name, _status(ok))
    console.print(checks)

    levels = Table(title="Levels")
    levels.add_column("i", justify="right", style="cyan")
    levels.add_column("|C_{i-1}|", justify="right")
    levels.add_column("|F_i|", justify="right")
    levels.add_column("nnz", justify="right")
    levels.add_column("RCDD margin", justify="right")
    levels.add_column("Euler resid", justify="right")
    levels.add_column("delta_i", justify="right")
    levels.add_column("measured", justify="right")
    for level in report.levels:
        levels.add_row(
            str(level.index),
            str(level.size),
            str(level.n_f),
            str(level.nnz),
            _fmt(level.rcdd_margin, ".3f"),
            _fmt(level.eulerian_residual),
            _fmt(level.delta_declared),
            _fmt(level.delta_measured),
        )
    console.print(levels)

    verdict = "[green]PASSED[/green]" if report.passed else "[red]FAILED[/red]"
    console.print(f"Chain validation: {verdict}")
    console.print()


def print_solve_report(report: SolveReport, console: Console | None = None) -> None:
    """Print the outcome of one solve."""
    console = console or Console()

    table = Table(title="Solve")
    table.add_column("Metric", style="cyan")
    table.add_column("Value", justify="right")
    table.add_row("n", str(report.n))
    table.add_row("eps", _fmt(report.eps, ".1e"))
    table.add_row("Converged", _status(report.converged))
    table.add_row("Iterations", str(report.iterations))
    table.add_row("Inner sweeps N", str(report.inner_n))
    table.add_row("b projected", "yes" if report.projected_b else "no")
    table.add_row("Last update norm", _fmt(report.update_norms[-1] if report.update_norms else None))
    table.add_row("Contraction estimate", _fmt(report.contraction_estimate, ".3f"))
    table.add_row("Measured eps", _fmt(report.measured_eps))
    table.add_row("Wall time (s)", f"{report.wall_seconds:.3f}")
    console.print(table)


def print_bench_report(results: BenchResults, console: Console | None = None) -> None:
    """Print a bench suite's per-instance rows and per-family summary."""
    console = console or Console()

    console.print()
    console.print(f"[bold blue]Bench suite: {results.suite}[/bold blue]")
    console.print(f"Seed: {results.seed}")
    console.print(f"Timestamp: {results.timestamp}")
    console.print()

    table = Table(title="Instances")
    table.add_column("Family", style="cyan")
    table.add_column("n", justify="right")
    table.add_column("nnz", justify="right")
    table.add_column("Build (ms)", justify="right")
    table.add_column("Solve (ms)", justify="right")
    table.add_column("Iters", justify="right")
    table.add_column("Measured eps", justify="right")
    table.add_column("Chain nnz", justify="right")
    table.add_column("OK", justify="center")
    frame = results.to_frame()
    for row in frame.itertuples(index=False):
        eps = None if row.measured_eps is None or math.isnan(row.measured_eps) else row.measured_eps
        table.add_row(
            row.family,
            str(row.n),
            str(row.nnz),
            f"{row.build_ms:.1f}",
            f"{row.solve_ms:.1f}",
            str(row.iterations),
            _fmt(eps),
            str(row.chain_nnz),
            _status(row.error is None and bool(row.converged)),
        )
    console.print(table)

    summary = results.calculate_summary()
    families = Table(title="Per-family summary")
    families.add_column("Family", style="cyan")
    families.add_column("Runs", justify="right")
    families.add_column("Failures", justify="right")
    families.add_column("Avg iters", justify="right")
    families.add_column("Max eps", justify="right")
    families.add_column("Avg chain fill", justify="right")
    for family, stats in summary.items():
        families.add_row(
            family,
            str(stats["count"]),
            str(stats["failures"]),
            _fmt(stats.get("avg_iterations"), ".1f"),
            _fmt(stats.get("max_measured_eps")),
            _fmt(stats.get("avg_chain_fill"), ".2f"),
        )
    console.print(families)
    console.print()


def generate_markdown_report(results: BenchResults) -> str:
    """Generate a markdown report."""
    lines = [
        f"# Bench Results: {results.suite}",
        "",
        f"**Seed:** {results.seed}",
        f"**Timestamp:** {results.timestamp}",
        "",
        "## Instances",
        "",
        "| Family | n | nnz | Build (ms) | Solve (ms) | Iterations | Measured eps | Chain nnz |",
        "|--------|---|-----|------------|------------|------------|--------------|-----------|",
    ]
    for r in sorted(results.records, key=lambda r: (r.family, r.n)):
        lines.append(
            f"| {r.family} | {r.n} | {r.nnz} | {r.build_ms:.1f} | {r.solve_ms:.1f} | "
            f"{r.iterations} | {_fmt(r.measured_eps)} | {r.chain_nnz} |"
        )

    failures = [r for r in results.records if r.error is not None]
    if failures:
        lines.extend(["", "## Failures", ""])
        lines.extend(f"- {r.family} n={r.n}: {r.error}" for r in failures)

    lines.append("")
    return "\n".join(lines)


def load_and_report(results_dir: Path, console: Console | None = None) -> None:
    """Load every saved bench result in a directory and print it."""
    console = console or Console()

    json_files = list(results_dir.glob("*.json"))
    if not json_files:
        console.print(f"[red]No results found in {results_dir}[/red]")
        return

    for json_file in sorted(json_files):
        console.print(f"[dim]Loading {json_file.name}...[/dim]")
        print_bench_report(BenchResults.load(json_file), console)
