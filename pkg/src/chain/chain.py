"""Multi-level Schur complement chains."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel, Field, field_validator
from rich.console import Console

from ..config import DEFAULT_ALPHA, DEFAULT_DELTA, DEFAULT_LEAF_SIZE, Tolerances
from ..core import DirectedLaplacian, Partition, SparseMatrix, strongly_connected, symmetrize
from ..elimination import SchurTrace, find_rcdd, sparse_schur_traced
from ..errors import ChainBuildError, PreconditionViolated, RetryExhausted
from ..oracle import pinv
from ..sparsify import RngStream, SparsifierConfig, spar_e


class ChainConfig(BaseModel):
    """Parameters of chain construction."""

    alpha: float = Field(default=DEFAULT_ALPHA, gt=0)
    delta: float = DEFAULT_DELTA
    leaf_size: int = Field(default=DEFAULT_LEAF_SIZE, ge=1)
    max_levels: int = Field(default=200, ge=1)
    nnz_budget_factor: float = Field(default=64.0, gt=0)  # soft; reported, never enforced
    sparsifier: SparsifierConfig = Field(default_factory=SparsifierConfig)
    tolerances: Tolerances = Field(default_factory=Tolerances)

    @field_validator("delta")
    @classmethod
    def _delta_in_unit_interval(cls, v: float) -> float:
        if not 0.0 < v < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {v}")
        return v

    @property
    def beta(self) -> float:
        return 1.0 / (16.0 * (1.0 + self.alpha))

    def level_delta(self, i: int) -> float:
        """Declared error delta / i^2 of level i."""
        return self.delta / i**2

    def build_delta(self, i: int) -> float:
        """Error delta / (3 i^2) requested from the sparsifiers for level i."""
        return self.delta / (3 * i**2)


@dataclass
class ChainLevel:
    """One level: S^(i) on the vertices C_{i-1}, and the set F_i it eliminates."""

    index: int  # 1-based
    laplacian: DirectedLaplacian
    support: np.ndarray  # global indices of C_{i-1}
    f_local: np.ndarray  # F_i as positions within `support`
    schur_trace: SchurTrace | None = None

    @property
    def size(self) -> int:
        return int(self.support.size)

    @property
    def partition(self) -> Partition:
        return Partition.from_f(self.f_local, self.size)

    @property
    def f_global(self) -> np.ndarray:
        return self.support[self.f_local]

    @property
    def c_local(self) -> np.ndarray:
        return self.partition.c

    @property
    def c_global(self) -> np.ndarray:
        return self.support[self.c_local]


@dataclass
class SchurChain:
    """Sequence of sparsified Schur complements ending in a dense-solved leaf."""

    n: int
    alpha: float
    delta: float
    leaf_size: int
    levels: list[ChainLevel] = field(default_factory=list)
    leaf_pinv: np.ndarray | None = None
    build_seconds: float = 0.0
    nnz_budget_factor: float = 64.0

    @property
    def beta(self) -> float:
        return 1.0 / (16.0 * (1.0 + self.alpha))

    @property
    def depth(self) -> int:
        return len(self.levels)

    @property
    def leaf(self) -> ChainLevel:
        return self.levels[-1]

    def level_delta(self, i: int) -> float:
        return self.delta / i**2

    @property
    def total_nnz(self) -> int:
        return sum(level.laplacian.nnz for level in self.levels)

    @property
    def nnz_budget(self) -> float:
        """c * nnz(S^(1)) * sum_i (1 - beta)^(i-1) i^2."""
        if not self.levels:
            return 0.0
        base = self.levels[0].laplacian.nnz
        return self.nnz_budget_factor * base * sum(
            (1 - self.beta) ** (i - 1) * i**2 for i in range(1, self.depth + 1)
        )


def symmetric_boost(S: DirectedLaplacian, delta: float) -> DirectedLaplacian:
    """S + delta / (1 - delta) * U(S)."""
    factor = delta / (1.0 - delta)
    boosted = S.mat.csr + factor * symmetrize(S).csr
    return DirectedLaplacian(SparseMatrix(boosted), S.tolerances)


class ChainBuilder:
    """Builds Schur complement chains level by level."""

    def __init__(self, config: ChainConfig | None = None, console: Console | None = None):
        self.config = config or ChainConfig()
        self.console = console or Console(stderr=True)

    def build(self, L: DirectedLaplacian, rng: RngStream) -> SchurChain:
        """
        Build a chain for an Eulerian, strongly connected Laplacian.

        Level 1 is a boosted sparsifier of L. While more than `leaf_size`
        vertices remain, an RCDD set is eliminated by sparse_schur and the
        result is boosted by its own symmetrization to form the next level.
        The last level eliminates everything that is left, using a dense
        pseudoinverse.

        Raises:
            NotEulerian: If L is not Eulerian.
            PreconditionViolated: If L is not strongly connected.
            ChainBuildError: If an RCDD set cannot be found or a level loses
                strong connectivity.
        """
        cfg = self.config
        start = time.perf_counter()
        L.require_eulerian("chain input")
        if not strongly_connected(L):
            raise PreconditionViolated("chain input is not strongly connected")

        chain = SchurChain(
            n=L.n,
            alpha=cfg.alpha,
            delta=cfg.delta,
            leaf_size=cfg.leaf_size,
            nnz_budget_factor=cfg.nnz_budget_factor,
        )
        top = spar_e(L, cfg.build_delta(1), rng.child("level", 1, "spar_e"), cfg.sparsifier, self.console)
        current = symmetric_boost(top, cfg.build_delta(1))
        support = np.arange(L.n)
        i = 1

        while current.n > cfg.leaf_size:
            if i >= cfg.max_levels:
                raise ChainBuildError(f"exceeded {cfg.max_levels} levels with {current.n} vertices left", i)
            try:
                f = find_rcdd(current, cfg.alpha, rng.child("level", i, "find_rcdd"))
            except RetryExhausted as exc:
                raise ChainBuildError(str(exc), i) from exc
            part = Partition.from_f(f, current.n)
            result = sparse_schur_traced(
                current,
                part,
                cfg.build_delta(i + 1),
                rng.child("level", i, "schur"),
                cfg.sparsifier,
                console=self.console,
            )
            if not result.trace.strongly_connected:
                raise ChainBuildError("Schur complement is not strongly connected", i)

            chain.levels.append(ChainLevel(i, current, support, part.f, result.trace))
            self.console.print(
                f"[dim]level {i}: |C|={current.n} |F|={part.n_f} nnz={current.nnz} "
                f"K={result.trace.rounds}[/dim]"
            )
            support = support[part.c]
            current = symmetric_boost(result.laplacian, cfg.build_delta(i + 1))
            i += 1

        chain.levels.append(ChainLevel(i, current, support, np.arange(current.n)))
        chain.leaf_pinv = pinv(current)
        chain.build_seconds = time.perf_counter() - start

        if chain.total_nnz > chain.nnz_budget:
            self.console.print(
                f"[yellow]chain nnz {chain.total_nnz} exceeds soft budget {chain.nnz_budget:.0f}[/yellow]"
            )
        self.console.print(
            f"[green]chain built:[/green] depth={chain.depth} nnz={chain.total_nnz} "
            f"time={chain.build_seconds:.2f}s"
        )
        return chain


def build_chain(
    L: DirectedLaplacian,
    config: ChainConfig | None = None,
    rng: RngStream | None = None,
    console: Console | None = None,
) -> SchurChain:
    """Functional entry point for ChainBuilder.build."""
    return ChainBuilder(config, console).build(L, rng or RngStream(0))
