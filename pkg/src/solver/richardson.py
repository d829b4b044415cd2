"""Preconditioned Richardson iteration."""

from __future__ import annotations

from collections.abc import Callable
from typing import Any

import numpy as np
from scipy.sparse.linalg import LinearOperator, aslinearoperator

from ..core import DirectedLaplacian, SparseMatrix
from ..errors import Diverged

Operator = Callable[[np.ndarray], np.ndarray]


def as_operator(A: Any) -> Operator:
    """Matrix-vector product callable for arrays, scipy matrices, our matrices or callables."""
    if isinstance(A, DirectedLaplacian):
        return A.mat.csr.__matmul__
    if isinstance(A, SparseMatrix):
        return A.csr.__matmul__
    if isinstance(A, LinearOperator):
        return A.matvec
    if callable(A):
        return A
    return aslinearoperator(A).matvec


def pri(
    A: Any,
    b: np.ndarray,
    Z: Any,
    eta: float,
    n_iter: int,
    x0: np.ndarray | None = None,
) -> np.ndarray:
    """
    Preconditioned Richardson iteration x <- x + eta Z (b - A x).

    Args:
        A: System operator.
        b: Right-hand side.
        Z: Preconditioner operator.
        eta: Step size.
        n_iter: Number of iterations N.
        x0: Starting point, zero by default.

    Returns:
        x after N iterations.

    Raises:
        Diverged: If the iterate becomes non-finite.
    """
    apply_a = as_operator(A)
    apply_z = as_operator(Z)
    rhs = np.asarray(b, dtype=np.float64)
    x = np.zeros_like(rhs) if x0 is None else np.array(x0, dtype=np.float64)
    for k in range(n_iter):
        x = x + eta * apply_z(rhs - apply_a(x))
        if not np.all(np.isfinite(x)):
            raise Diverged(f"Richardson iterate became non-finite at iteration {k + 1}", k + 1)
    return x


def diagonal_operator(inv_diag: np.ndarray) -> Operator:
    """x -> inv_diag * x."""
    scale = np.asarray(inv_diag, dtype=np.float64)
    return lambda x: scale * x
