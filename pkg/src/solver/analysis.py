"""Dense diagnostics of chain preconditioners (oracle scale only)."""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np
import scipy.linalg as la

from ..chain import SchurChain
from ..config import ORACLE_CAP
from ..core import DirectedLaplacian, Partition
from ..errors import TooLarge
from ..oracle import as_dense, exact_schur, ones_projector, symmetrize, undirectify_dense
from .preconditioner import Preconditioner


def _check_size(chain: SchurChain, cap: int) -> None:
    if chain.n > cap:
        raise TooLarge(f"dense chain diagnostics capped at n = {cap}, got {chain.n}")


def _put(target: np.ndarray, block: np.ndarray, support: np.ndarray) -> None:
    target[np.ix_(support, support)] += block


def assemble_lap(chain: SchurChain, cap: int = ORACLE_CAP) -> np.ndarray:
    """
    The Laplacian the chain factors exactly:
    S^(1) + sum_i put(S^(i+1) - sc(S^(i), F_i), C_i).
    """
    _check_size(chain, cap)
    out = np.zeros((chain.n, chain.n))
    first = chain.levels[0]
    _put(out, as_dense(first.laplacian), first.support)
    for level, nxt in zip(chain.levels[:-1], chain.levels[1:]):
        schur = exact_schur(level.laplacian, level.partition)
        _put(out, as_dense(nxt.laplacian) - schur, nxt.support)
    return out


def preconditioner_matrix(
    chain: SchurChain,
    inner_n: int | Sequence[int] | None = None,
    cap: int = ORACLE_CAP,
) -> np.ndarray:
    """Dense matrix of the (projected) preconditioner, one column per basis vector."""
    _check_size(chain, cap)
    prec = Preconditioner(chain, inner_n)
    eye = np.eye(chain.n)
    return np.column_stack([prec.apply(eye[:, j]) for j in range(chain.n)])


def _complement_of(chain: SchurChain, upto: int) -> np.ndarray:
    """Global indices of C_upto."""
    return chain.levels[upto].support


def error_bound_matrix(chain: SchurChain, cap: int = ORACLE_CAP) -> np.ndarray:
    """
    delta_1 U(Lhat) + sum_{i=1}^{d-1} delta_{i+1} put(U(sc(Lhat, F_1 u ... u F_i)), C_i).
    """
    lap = assemble_lap(chain, cap)
    out = chain.level_delta(1) * undirectify_dense(lap)
    for i in range(1, chain.depth):
        keep = _complement_of(chain, i)
        part = Partition(f=np.setdiff1d(np.arange(chain.n), keep), c=keep, n=chain.n)
        schur = exact_schur(lap, part)
        _put(out, chain.level_delta(i + 1) * undirectify_dense(schur), keep)
    return out


def operator_norm(M: np.ndarray, B: np.ndarray, rtol: float = 1e-10) -> float:
    """sup ||M x||_B / ||x||_B over x outside ker(B), i.e. ||B^{1/2} M B^{+/2}||_2."""
    w, V = la.eigh(symmetrize(B))
    keep = w > rtol * max(float(w[-1]), np.finfo(float).tiny)
    root = V[:, keep] * np.sqrt(w[keep])
    inv_root = V[:, keep] / np.sqrt(w[keep])
    return float(la.norm(root.T @ M @ inv_root, 2))


def iteration_matrix(chain: SchurChain, L: DirectedLaplacian, inner_n: int | Sequence[int] | None = None) -> np.ndarray:
    """Pi - Pi Z L, the error propagator of one outer step."""
    proj = ones_projector(chain.n)
    z = preconditioner_matrix(chain, inner_n)
    return proj - z @ as_dense(L)


def bhat_contraction(chain: SchurChain, L: DirectedLaplacian, inner_n: int | Sequence[int] | None = None) -> float:
    """Contraction factor of one outer step measured in the error-bound norm."""
    return operator_norm(iteration_matrix(chain, L, inner_n), error_bound_matrix(chain))


def u_contraction(chain: SchurChain, L: DirectedLaplacian, inner_n: int | Sequence[int] | None = None) -> float:
    """Contraction factor of one outer step measured in the U(L) norm."""
    return operator_norm(iteration_matrix(chain, L, inner_n), undirectify_dense(as_dense(L)))


def inner_iteration_radius(s_ff: np.ndarray) -> float:
    """Spectral radius of I - D^{-1} S_FF / 2."""
    block = np.asarray(s_ff, dtype=np.float64)
    d = np.diag(block)
    step = np.eye(block.shape[0]) - 0.5 * block / d[:, None]
    return float(np.max(np.abs(la.eigvals(step))))


def inner_radius_bound(alpha: float) -> float:
    """(2 + alpha) / (2 (1 + alpha))."""
    if math.isinf(alpha):
        return 0.5
    return (2.0 + alpha) / (2.0 * (1.0 + alpha))


def truncated_inverse(s_ff: np.ndarray, n_iter: int) -> np.ndarray:
    """The linear map N Richardson steps on S_FF apply to a right-hand side."""
    block = np.asarray(s_ff, dtype=np.float64)
    d_inv = 1.0 / np.diag(block)
    step = np.eye(block.shape[0]) - 0.5 * d_inv[:, None] * block
    out = np.zeros_like(block)
    power = np.eye(block.shape[0])
    for _ in range(n_iter):
        out += power
        power = step @ power
    return out @ (0.5 * np.diag(d_inv))


def inner_truncation_bound(alpha: float, n_iter: int, d_inv_norm: float) -> float:
    """((1 + alpha) / alpha) * ((2 + alpha) / (2 (1 + alpha)))^N * ||D^{-1}||_inf."""
    if math.isinf(alpha):
        return 0.5**n_iter * d_inv_norm
    return (1.0 + alpha) / alpha * inner_radius_bound(alpha) ** n_iter * d_inv_norm
