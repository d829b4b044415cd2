"""Eulerian repair of truncated Schur complement estimates."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..core import SparseMatrix
from ..errors import PreconditionViolated

NEGATIVE_SUM_RTOL = 1e-9


@dataclass
class PatchMatrix:
    """Correction R supported on the first row and column."""

    mat: SparseMatrix

    @property
    def norm(self) -> float:
        """Spectral norm of R."""
        if self.mat.nnz == 0:
            return 0.0
        return float(np.linalg.norm(self.mat.to_dense(), 2))


def patch_matrix(S0: SparseMatrix) -> PatchMatrix:
    """
    Build R so that S0 + R has zero row and column sums.

    R[i, 0] = -(S0 1)_i and R[0, j] = -(1^T S0)_j for i, j >= 1, and R[0, 0]
    absorbs the remaining mass. Every other entry of R is zero, so the
    off-diagonals of S0 + R stay nonpositive.

    Raises:
        PreconditionViolated: If S0 has clearly negative row or column sums.
    """
    n = S0.n_rows
    if S0.n_cols != n:
        raise PreconditionViolated(f"patch_matrix needs a square matrix, got {S0.shape}")
    if n == 0:
        return PatchMatrix(SparseMatrix.zeros(0))

    r = S0.row_sums()
    c = S0.col_sums()
    scale = max(float(np.max(np.abs(S0.diagonal()))), 1e-300)
    floor = -NEGATIVE_SUM_RTOL * scale
    if r[1:].min(initial=0.0) < floor or c[1:].min(initial=0.0) < floor:
        raise PreconditionViolated(
            f"S0 has negative row/column sums (min {min(r.min(), c.min()):.3e})"
        )
    r_tail = np.maximum(r[1:], 0.0)
    c_tail = np.maximum(c[1:], 0.0)
    total = float(r.sum())
    corner = float(c_tail.sum() + r_tail.sum() - total)

    idx = np.arange(1, n)
    rows = np.concatenate([idx, np.zeros(n - 1, dtype=np.int64), [0]])
    cols = np.concatenate([np.zeros(n - 1, dtype=np.int64), idx, [0]])
    vals = np.concatenate([-r_tail, -c_tail, [corner]])
    mat = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    mat.eliminate_zeros()
    return PatchMatrix(SparseMatrix(mat))


def patch_bound(n: int, d_ff_norm: float, alpha: float, rounds: int) -> float:
    """
    Bound on the truncated-series error after `rounds` squaring rounds:
    n^2 ||D_FF|| / (2^(K-1) alpha) * (1 / (1 + alpha))^(2^K).
    """
    if math.isinf(alpha):
        return 0.0
    if alpha <= 0:
        return math.inf
    decay = (1.0 / (1.0 + alpha)) ** (2**rounds)
    return n**2 * d_ff_norm / (2 ** (rounds - 1) * alpha) * decay
