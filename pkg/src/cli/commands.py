"""Implementations of the eulersolve subcommands."""

from __future__ import annotations

import json
from datetime import datetime
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, Field
from rich.console import Console

from ..benchmarks import gen, run_suite
from ..chain import ChainConfig, SchurChain, build_chain, load_chain, save_chain, validate_chain
from ..config import DEFAULT_SEED, ORACLE_CAP, RESULTS_DIR
from ..core import (
    DirectedLaplacian,
    read_matrix_market,
    read_vector,
    strongly_connected,
    write_matrix_market,
    write_vector,
)
from ..errors import PreconditionViolated, Stagnated, UsageError
from ..metrics import generate_markdown_report, print_bench_report, print_chain_report, print_solve_report
from ..solver import SolveConfig, SolveReport, Solver
from ..sparsify import RngStream

CHAIN_REPORT_FILE = "chain_report.json"

Command = Literal["gen", "build", "solve", "validate", "bench"]


class RunConfig(BaseModel):
    """Everything one CLI invocation needs; the seed is always explicit."""

    command: Command
    seed: int = DEFAULT_SEED
    input: Path | None = None
    output: Path | None = None
    chain_dir: Path | None = None
    rhs: Path | None = None
    report: Path | None = None
    family: str = "cycle"
    n: int = Field(default=3, ge=1)
    m: int | None = None
    suite: str = "smoke"
    oracle_cap: int = Field(default=ORACLE_CAP, ge=1)
    chain: ChainConfig = Field(default_factory=ChainConfig)
    solve: SolveConfig = Field(default_factory=SolveConfig)


def _require(path: Path | None, what: str) -> Path:
    if path is None:
        raise UsageError(f"missing {what}")
    if not path.exists():
        raise UsageError(f"{what} {path} does not exist")
    return path


def load_laplacian(path: Path, config: RunConfig) -> DirectedLaplacian:
    """
    Read a graph file and check it is a strongly connected Eulerian Laplacian.

    Raises:
        NotLaplacian: If the matrix is not a directed Laplacian.
        NotEulerian: If row sums do not vanish.
        PreconditionViolated: If the graph is not strongly connected.
    """
    L = DirectedLaplacian(read_matrix_market(path), config.chain.tolerances)
    L.require_eulerian(
        f"{path} (only Eulerian Laplacians are supported; general strongly connected "
        "inputs need a reduction that is not provided)"
    )
    if not strongly_connected(L):
        raise PreconditionViolated(f"{path} is not strongly connected")
    return L


def _chain_for(L: DirectedLaplacian, config: RunConfig, console: Console) -> SchurChain:
    if config.chain_dir is not None:
        chain = load_chain(config.chain_dir, config.chain.tolerances)
        if chain.n != L.n:
            raise UsageError(f"chain in {config.chain_dir} has n={chain.n}, graph has n={L.n}")
        return chain
    return build_chain(L, config.chain, RngStream(config.seed).child("build"), console)


def cmd_gen(config: RunConfig, console: Console) -> Path:
    """Write a generated graph as Matrix Market."""
    L = gen(config.family, config.n, config.m, config.seed)
    out = config.output or Path(f"{config.family}_{config.n}.mtx")
    write_matrix_market(
        out, L.mat, comment=f"family={config.family} n={config.n} m={config.m} seed={config.seed}"
    )
    console.print(f"[green]wrote[/green] {out} (n={L.n}, nnz={L.nnz})")
    return out


def cmd_build(config: RunConfig, console: Console) -> Path:
    """Build a chain, save it and its validation report."""
    L = load_laplacian(_require(config.input, "input graph"), config)
    chain = build_chain(L, config.chain, RngStream(config.seed).child("build"), console)
    out = config.output or config.chain_dir or Path("chain")
    save_chain(chain, out)

    report = validate_chain(chain, L, config.chain.tolerances, config.oracle_cap)
    data = report.to_dict()
    data["seed"] = config.seed
    (out / CHAIN_REPORT_FILE).write_text(json.dumps(data, indent=2))
    print_chain_report(report, console)
    return out


def _save_solve_report(report: SolveReport, config: RunConfig) -> None:
    if config.report is None:
        return
    data = report.model_dump()
    data["seed"] = config.seed
    config.report.parent.mkdir(parents=True, exist_ok=True)
    config.report.write_text(json.dumps(data, indent=2))


def cmd_solve(config: RunConfig, console: Console) -> Path:
    """
    Solve L x = b and write x, one float per line.

    Without a saved chain, one is built from the seed first.

    Raises:
        Stagnated: Re-raised after the partial report is saved and printed.
    """
    L = load_laplacian(_require(config.input, "input graph"), config)
    b = read_vector(_require(config.rhs, "right-hand side"))
    chain = _chain_for(L, config, console)

    try:
        x, report = Solver(chain, config.solve, console).solve(L, b)
    except Stagnated as exc:
        if isinstance(exc.report, SolveReport):
            _save_solve_report(exc.report, config)
            print_solve_report(exc.report, console)
        raise

    out = config.output or Path("solution.txt")
    write_vector(out, x)
    _save_solve_report(report, config)
    print_solve_report(report, console)
    console.print(f"[green]wrote[/green] {out}")
    return out


def cmd_validate(config: RunConfig, console: Console) -> bool:
    """Validate a saved chain against its graph; returns whether every check passed."""
    L = load_laplacian(_require(config.input, "input graph"), config)
    chain = load_chain(_require(config.chain_dir, "chain directory"), config.chain.tolerances)
    report = validate_chain(chain, L, config.chain.tolerances, config.oracle_cap)
    if config.report is not None:
        data = report.to_dict()
        data["seed"] = config.seed
        config.report.parent.mkdir(parents=True, exist_ok=True)
        config.report.write_text(json.dumps(data, indent=2))
    print_chain_report(report, console)
    return report.passed


def cmd_bench(config: RunConfig, console: Console) -> Path:
    """Run a bench suite and write CSV, JSON and markdown results."""
    results = run_suite(config.suite, config.seed, config.chain, config.solve, console=console)
    out_dir = config.output or RESULTS_DIR
    stamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    csv_path = out_dir / f"bench_{config.suite}_{stamp}.csv"
    results.save_csv(csv_path)
    results.save(out_dir / f"bench_{config.suite}_{stamp}.json")
    (out_dir / f"bench_{config.suite}_{stamp}.md").write_text(generate_markdown_report(results))
    print_bench_report(results, console)
    console.print(f"[green]wrote[/green] {csv_path}")
    return csv_path

