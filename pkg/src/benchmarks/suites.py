"""Named bench suites and the single-instance bench runner."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
from rich.console import Console

from ..chain import ChainConfig, build_chain, validate_chain
from ..config import ORACLE_CAP
from ..errors import EulerSolveError, Stagnated
from ..metrics import BenchRecord, BenchResults
from ..oracle import as_dense, pinv, u_norm, undirectify_dense
from ..solver import SolveConfig, Solver
from ..sparsify import RngStream
from .generators import gen, random_rhs


@dataclass(frozen=True)
class BenchCase:
    """One generated instance of a suite."""

    family: str
    n: int
    m: int | None = None

    @property
    def label(self) -> str:
        return f"{self.family}-{self.n}"


def _grid(families: tuple[str, ...], sizes: tuple[int, ...]) -> list[BenchCase]:
    return [BenchCase(family, n) for family in families for n in sizes]


# torus_flow needs perfect squares, so all sizes are squares
SUITES: dict[str, list[BenchCase]] = {
    "smoke": _grid(("cycle", "random_eulerian", "torus_flow"), (36, 64, 144, 256)),
    "standard": _grid(("cycle", "random_eulerian", "torus_flow"), (256, 576, 1024, 1936)),
}


def get_suite(name: str) -> list[BenchCase]:
    if name not in SUITES:
        raise ValueError(f"Unknown bench suite: {name}. Available: {', '.join(SUITES)}")
    return SUITES[name]


def measured_error(L_dense: np.ndarray, b: np.ndarray, x: np.ndarray) -> float:
    """||x - L^+ b||_U / ||L^+ b||_U against a dense reference solution."""
    U = undirectify_dense(L_dense)
    x_star = pinv(L_dense) @ b
    return u_norm(U, x - x_star) / max(u_norm(U, x_star), np.finfo(float).tiny)


def run_case(
    case: BenchCase,
    seed: int = 0,
    chain_config: ChainConfig | None = None,
    solve_config: SolveConfig | None = None,
    validate: bool = False,
    oracle_cap: int = ORACLE_CAP,
    console: Console | None = None,
) -> BenchRecord:
    """
    Generate, build, solve and measure one bench instance.

    Errors raised by the library are recorded on the returned record rather
    than propagated, so one failing instance does not abort a suite.
    """
    console = console or Console(quiet=True)
    record = BenchRecord(family=case.family, n=case.n, seed=seed)
    try:
        L = gen(case.family, case.n, case.m, seed)
        record.nnz = L.nnz

        start = time.perf_counter()
        chain = build_chain(L, chain_config, RngStream(seed).child("bench", case.label), console)
        record.build_ms = 1000 * (time.perf_counter() - start)
        record.chain_nnz = chain.total_nnz
        record.depth = chain.depth
        if validate:
            record.chain_passed = validate_chain(chain, L, oracle_cap=oracle_cap).passed

        b = random_rhs(case.n, seed)
        start = time.perf_counter()
        x, report = Solver(chain, solve_config, console).solve(L, b)
        record.solve_ms = 1000 * (time.perf_counter() - start)
        record.iterations = report.iterations
        record.converged = report.converged
        record.contraction = report.contraction_estimate
        if case.n <= oracle_cap:
            record.measured_eps = measured_error(as_dense(L, oracle_cap), b, x)
    except Stagnated as exc:
        record.error = f"Stagnated: {exc}"
        if exc.report is not None:
            record.iterations = exc.report.iterations
    except EulerSolveError as exc:
        record.error = f"{type(exc).__name__}: {exc}"
    return record


def run_suite(
    name: str,
    seed: int = 0,
    chain_config: ChainConfig | None = None,
    solve_config: SolveConfig | None = None,
    validate: bool = False,
    console: Console | None = None,
) -> BenchResults:
    """Run every case of a suite in order."""
    results = BenchResults(suite=name, seed=seed)
    for case in get_suite(name):
        record = run_case(case, seed, chain_config, solve_config, validate)
        results.add_record(record)
        if console is not None:
            status = "[green]ok[/green]" if record.error is None else f"[red]{record.error}[/red]"
            console.print(f"[dim]{case.label}:[/dim] {status}")
    return results
