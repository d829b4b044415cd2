"""Outer preconditioned Richardson solver for Eulerian Laplacian systems."""

from __future__ import annotations

import math
import time

import numpy as np
from pydantic import BaseModel, Field, field_validator
from rich.console import Console

from ..chain import SchurChain
from ..config import DEFAULT_EPS, DEFAULT_INNER_LOG_FACTOR
from ..core import DirectedLaplacian
from ..errors import Diverged, SizeError, Stagnated
from .preconditioner import Preconditioner, inner_sweeps


class SolveConfig(BaseModel):
    """Outer iteration settings."""

    eps: float = DEFAULT_EPS
    inner_n: int | None = Field(default=None, ge=1)  # None: ceil(inner_log_factor * log2 n)
    inner_log_factor: float = Field(default=DEFAULT_INNER_LOG_FACTOR, gt=0)
    step: float = Field(default=1.0, gt=0)
    max_iter: int | None = Field(default=None, ge=1)  # None: 40 * ceil(log2(n / eps))
    stagnation_window: int = Field(default=20, ge=1)
    stagnation_ratio: float = Field(default=0.99, gt=0, le=1)
    stop_safety: float = Field(default=0.1, gt=0, le=1)
    orthogonality_rtol: float = Field(default=1e-10, gt=0)

    @field_validator("eps")
    @classmethod
    def _eps_in_unit_interval(cls, v: float) -> float:
        if not 0.0 < v < 1.0:
            raise ValueError(f"eps must lie in (0, 1), got {v}")
        return v

    def iteration_cap(self, n: int) -> int:
        if self.max_iter is not None:
            return self.max_iter
        return 40 * math.ceil(math.log2(max(n, 2) / self.eps))


class SolveReport(BaseModel):
    """Outcome of one solve."""

    n: int
    eps: float
    iterations: int = 0
    converged: bool = False
    inner_n: int = 0
    projected_b: bool = False
    update_norms: list[float] = Field(default_factory=list)  # ||x_{k+1} - x_k||_{U(L)}
    residual_norms: list[float] = Field(default_factory=list)  # ||b - L x_k||_2
    contraction_estimate: float | None = None
    wall_seconds: float = 0.0
    measured_eps: float | None = None  # filled in by callers holding a reference solution


def u_seminorm(L: DirectedLaplacian, x: np.ndarray) -> float:
    """sqrt(x^T U(L) x) = sqrt(x^T L x)."""
    return math.sqrt(max(float(x @ L.spmv(x)), 0.0))


def _contraction(norms: list[float], window: int = 5) -> float | None:
    tail = [v for v in norms[-(window + 1) :] if v > 0]
    if len(tail) < 2:
        return None
    return float((tail[-1] / tail[0]) ** (1.0 / (len(tail) - 1)))


class Solver:
    """Solves L x = b with a fixed Schur complement chain as preconditioner."""

    def __init__(
        self,
        chain: SchurChain,
        config: SolveConfig | None = None,
        console: Console | None = None,
    ):
        self.chain = chain
        self.config = config or SolveConfig()
        self.console = console or Console(stderr=True)
        inner = self.config.inner_n or inner_sweeps(chain.n, self.config.inner_log_factor)
        self.preconditioner = Preconditioner(chain, inner)
        self.inner_n = inner

    def solve(self, L: DirectedLaplacian, b: np.ndarray) -> tuple[np.ndarray, SolveReport]:
        """
        Run x <- x + eta Z (b - L x) from x = 0.

        Stops once the U(L)-norm of the last update falls below
        stop_safety * eps * ||x||_U. A b with a component along the all-ones
        vector is projected first, with a warning.

        Returns:
            (x, report) with x orthogonal to the all-ones vector.

        Raises:
            Stagnated: If the update norm fails to shrink by 1% over the
                stagnation window, or the iteration cap is reached.
            Diverged: If the iterate becomes non-finite.
        """
        cfg = self.config
        n = L.n
        if n != self.chain.n:
            raise SizeError(f"chain built for n={self.chain.n}, Laplacian has n={n}")
        rhs = np.array(b, dtype=np.float64)
        if rhs.shape != (n,):
            raise SizeError(f"right-hand side has shape {rhs.shape}, expected ({n},)")
        L.require_eulerian("solve input")

        start = time.perf_counter()
        report = SolveReport(n=n, eps=cfg.eps, inner_n=self.inner_n)

        b_norm = float(np.linalg.norm(rhs))
        drift = abs(float(rhs.sum())) / math.sqrt(n)
        if drift > cfg.orthogonality_rtol * max(b_norm, np.finfo(float).tiny):
            rhs = rhs - rhs.mean()
            report.projected_b = True
            self.console.print(
                f"[yellow]b is not orthogonal to 1 (|1^T b|/sqrt(n) = {drift:.3e}); projected[/yellow]"
            )

        x = np.zeros(n)
        if not np.any(rhs):
            report.converged = True
            report.wall_seconds = time.perf_counter() - start
            return x, report

        cap = cfg.iteration_cap(n)
        window = cfg.stagnation_window
        for k in range(1, cap + 1):
            residual = rhs - L.spmv(x)
            report.residual_norms.append(float(np.linalg.norm(residual)))
            update = cfg.step * self.preconditioner.apply(residual)
            x = x + update
            if not np.all(np.isfinite(x)):
                raise Diverged(f"outer iterate became non-finite at iteration {k}", k)

            update_norm = u_seminorm(L, update)
            report.update_norms.append(update_norm)
            report.iterations = k
            report.contraction_estimate = _contraction(report.update_norms)

            if update_norm <= cfg.stop_safety * cfg.eps * u_seminorm(L, x):
                report.converged = True
                break
            if k > window and update_norm > cfg.stagnation_ratio * report.update_norms[k - 1 - window]:
                report.wall_seconds = time.perf_counter() - start
                self.console.print(f"[red]solver stagnated after {k} iterations[/red]")
                raise Stagnated(
                    f"update norm fell by less than {1 - cfg.stagnation_ratio:.0%} over "
                    f"{window} iterations (iteration {k})",
                    report,
                )

        report.wall_seconds = time.perf_counter() - start
        if not report.converged:
            raise Stagnated(f"iteration cap {cap} reached without convergence", report)
        return x, report


def solve(
    L: DirectedLaplacian,
    b: np.ndarray,
    eps: float,
    chain: SchurChain,
    config: SolveConfig | None = None,
    console: Console | None = None,
) -> tuple[np.ndarray, SolveReport]:
    """Solve L x = b to relative U(L)-error eps using `chain` as preconditioner."""
    base = config or SolveConfig()
    cfg = SolveConfig(**{**base.model_dump(), "eps": eps})
    return Solver(chain, cfg, console).solve(L, b)
