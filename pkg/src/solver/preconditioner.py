"""Chain-based preconditioner for Eulerian Laplacian systems."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..chain import SchurChain
from ..config import DEFAULT_INNER_LOG_FACTOR
from ..errors import ChainError
from .richardson import diagonal_operator, pri

INNER_STEP = 0.5


def inner_sweeps(n: int, log_factor: float = DEFAULT_INNER_LOG_FACTOR) -> int:
    """N = ceil(c log2 n), at least 1."""
    return max(1, math.ceil(log_factor * math.log2(max(n, 2))))


@dataclass
class _LevelBlocks:
    f: np.ndarray  # global indices
    c: np.ndarray  # global indices
    s_ff: sp.csr_matrix
    s_fc: sp.csr_matrix
    s_cf: sp.csr_matrix
    inv_diag: np.ndarray


class Preconditioner:
    """
    Applies the chain's approximate inverse.

    A forward sweep eliminates F_1, ..., F_{d-1} with N Jacobi-preconditioned
    Richardson steps per block, the leaf is solved with its cached
    pseudoinverse, a backward sweep substitutes back, and the mean is
    projected out.
    """

    def __init__(self, chain: SchurChain, inner_n: int | Sequence[int] | None = None):
        if not chain.levels:
            raise ChainError("chain has no levels")
        if chain.leaf_pinv is None:
            raise ChainError("chain has no cached leaf pseudoinverse")
        self.chain = chain
        self.n = chain.n
        n_blocks = len(chain.levels) - 1
        if inner_n is None:
            counts = [inner_sweeps(chain.n)] * n_blocks
        elif isinstance(inner_n, int):
            counts = [inner_n] * n_blocks
        else:
            counts = list(inner_n)
            if len(counts) != n_blocks:
                raise ValueError(f"need {n_blocks} per-level inner counts, got {len(counts)}")
        if any(c < 1 for c in counts):
            raise ValueError(f"inner iteration counts must be positive, got {counts}")
        self.inner_counts = counts

        self._blocks: list[_LevelBlocks] = []
        for level in chain.levels[:-1]:
            part = level.partition
            csr = level.laplacian.mat.csr
            s_ff = csr[part.f][:, part.f].tocsr()
            diag = s_ff.diagonal()
            if np.any(diag <= 0):
                raise ChainError(f"level {level.index}: S_FF has a nonpositive diagonal")
            self._blocks.append(
                _LevelBlocks(
                    f=level.support[part.f],
                    c=level.support[part.c],
                    s_ff=s_ff,
                    s_fc=csr[part.f][:, part.c].tocsr(),
                    s_cf=csr[part.c][:, part.f].tocsr(),
                    inv_diag=1.0 / diag,
                )
            )
        self._leaf_support = chain.leaf.support
        self._leaf_pinv = chain.leaf_pinv

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Approximate L^+ x, with the result orthogonal to the all-ones vector."""
        y = np.array(x, dtype=np.float64)
        if y.shape != (self.n,):
            raise ValueError(f"expected a vector of length {self.n}, got shape {y.shape}")
        for block, n_iter in zip(self._blocks, self.inner_counts):
            y_f = pri(block.s_ff, y[block.f], diagonal_operator(block.inv_diag), INNER_STEP, n_iter)
            y[block.f] = y_f
            y[block.c] -= block.s_cf @ y_f

        y[self._leaf_support] = self._leaf_pinv @ y[self._leaf_support]

        for block, n_iter in zip(reversed(self._blocks), reversed(self.inner_counts)):
            correction = pri(
                block.s_ff, block.s_fc @ y[block.c], diagonal_operator(block.inv_diag), INNER_STEP, n_iter
            )
            y[block.f] -= correction

        return y - y.mean()

    __call__ = apply


def prec_apply(chain: SchurChain, x: np.ndarray, inner_n: int | Sequence[int] | None = None) -> np.ndarray:
    """One application of the chain preconditioner to x."""
    return Preconditioner(chain, inner_n).apply(x)
