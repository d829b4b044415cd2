"""Structural and spectral validation of Schur complement chains."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from ..config import ORACLE_CAP, Tolerances
from ..core import DirectedLaplacian, rcdd_margin, strongly_connected
from ..errors import SingularBlock
from ..oracle import as_dense, asym_measure, exact_schur, loewner_gap, undirectify_dense
from .chain import SchurChain

RCDD_SLACK = 1e-9


@dataclass
class LevelReport:
    """Measurements for one chain level."""

    index: int
    size: int
    n_f: int
    nnz: int
    rcdd_margin: float
    eulerian_residual: float
    strongly_connected: bool
    delta_declared: float
    delta_measured: float | None = None
    kernel_ok: bool | None = None
    domination_gap: float | None = None


@dataclass
class ChainReport:
    """Outcome of validate_chain."""

    n: int
    depth: int
    alpha: float
    beta: float
    delta: float
    conditions: dict[str, bool] = field(default_factory=dict)
    levels: list[LevelReport] = field(default_factory=list)
    total_nnz: int = 0
    nnz_budget: float = 0.0
    oracle_checked: bool = False
    build_seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(self.conditions.values())

    @property
    def nnz_within_budget(self) -> bool:
        return self.total_nnz <= self.nnz_budget

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["passed"] = self.passed
        data["nnz_within_budget"] = self.nnz_within_budget
        for level in data["levels"]:
            if math.isinf(level["rcdd_margin"]):
                level["rcdd_margin"] = None
        return data


def _check_partitions(chain: SchurChain) -> bool:
    ok = chain.levels[0].size == chain.n and np.array_equal(
        chain.levels[0].support, np.arange(chain.n)
    )
    for i, level in enumerate(chain.levels[:-1]):
        nxt = chain.levels[i + 1]
        ok &= np.array_equal(nxt.support, level.c_global)
        ok &= nxt.size <= (1 - chain.beta) ** level.index * chain.n + 1e-9
        ok &= level.f_local.size > 0
    leaf = chain.leaf
    ok &= leaf.f_local.size == leaf.size and leaf.size <= max(chain.leaf_size, 1)
    return bool(ok)


def validate_chain(
    chain: SchurChain,
    L: DirectedLaplacian,
    tolerances: Tolerances | None = None,
    oracle_cap: int = ORACLE_CAP,
) -> ChainReport:
    """
    Check a chain against the conditions that make it a valid preconditioner.

    Always checked: the partition structure and shrinkage, diagonal dominance
    of every eliminated block, the Eulerian property and strong connectivity
    of every level. With n <= oracle_cap, also the per-level approximation
    errors (level 1 against L, level i against the exact Schur complement of
    level i-1, each within delta / i^2) and the domination of the
    symmetrized Schur complements.
    """
    tols = tolerances or L.tolerances
    report = ChainReport(
        n=chain.n,
        depth=chain.depth,
        alpha=chain.alpha,
        beta=chain.beta,
        delta=chain.delta,
        total_nnz=chain.total_nnz,
        nnz_budget=chain.nnz_budget,
        build_seconds=chain.build_seconds,
    )

    for level in chain.levels:
        is_leaf = level is chain.leaf
        margin = (
            math.inf
            if is_leaf
            else rcdd_margin(level.laplacian.restrict(level.f_local, level.f_local))
        )
        report.levels.append(
            LevelReport(
                index=level.index,
                size=level.size,
                n_f=int(level.f_local.size),
                nnz=level.laplacian.nnz,
                rcdd_margin=margin,
                eulerian_residual=level.laplacian.eulerian_residual,
                strongly_connected=strongly_connected(level.laplacian),
                delta_declared=chain.level_delta(level.index),
            )
        )

    report.conditions["partition"] = _check_partitions(chain)
    report.conditions["rcdd"] = all(
        lr.rcdd_margin >= chain.alpha * (1 - RCDD_SLACK) for lr in report.levels[:-1]
    )
    report.conditions["eulerian"] = all(
        lr.eulerian_residual <= tols.structural_tol for lr in report.levels
    )
    report.conditions["strong_connectivity"] = all(lr.strongly_connected for lr in report.levels)

    if chain.n > oracle_cap:
        return report

    report.oracle_checked = True
    approx_ok = True
    dominated = True
    reference: np.ndarray | None = as_dense(L, oracle_cap)
    for idx, level in enumerate(chain.levels):
        lr = report.levels[idx]
        if reference is None:
            # an earlier level had a singular eliminated block
            approx_ok = dominated = False
            continue
        current = as_dense(level.laplacian, oracle_cap)
        u_ref = undirectify_dense(reference)
        measure = asym_measure(current - reference, u_ref, tols, oracle_cap)
        lr.delta_measured = measure.value
        lr.kernel_ok = measure.kernel_ok
        lr.domination_gap = loewner_gap(u_ref, undirectify_dense(current), cap=oracle_cap)
        approx_ok &= measure.kernel_ok and measure.value <= lr.delta_declared
        dominated &= lr.domination_gap >= -tols.psd_tol

        if level is not chain.leaf:
            try:
                reference = exact_schur(current, level.partition, oracle_cap)
            except SingularBlock:
                reference = None

    report.conditions["approximation"] = bool(approx_ok)
    report.conditions["domination"] = bool(dominated)
    return report
