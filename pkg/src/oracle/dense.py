"""Dense reference linear algebra: pseudoinverses, Schur complements and spectral measures."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from ..config import ORACLE_CAP, Tolerances
from ..core import DirectedLaplacian, Partition, SparseMatrix, SymmetricPSD
from ..errors import NotPSD, NumericError, SingularBlock, TooLarge

DenseMatrix = np.ndarray

PINV_RTOL = 1e-12
KERNEL_RTOL = 1e-10  # eigenvalues below this fraction of lambda_max count as kernel
SINGULAR_RTOL = 1e-12

DenseLike = np.ndarray | SparseMatrix | DirectedLaplacian | SymmetricPSD


def as_dense(A: DenseLike, cap: int = ORACLE_CAP) -> DenseMatrix:
    """
    Dense float64 copy of a matrix-like object.

    Raises:
        TooLarge: If either dimension exceeds `cap`.
        NumericError: If any entry is NaN or infinite.
    """
    if isinstance(A, (DirectedLaplacian, SymmetricPSD)):
        A = A.mat
    if isinstance(A, SparseMatrix):
        if max(A.shape) > cap:
            raise TooLarge(f"dense oracle capped at n = {cap}, got {A.shape}")
        arr = A.to_dense()
    else:
        arr = np.array(A, dtype=np.float64)
        if arr.ndim == 2 and max(arr.shape) > cap:
            raise TooLarge(f"dense oracle capped at n = {cap}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NumericError("matrix contains non-finite entries")
    return arr


def pinv(A: DenseLike, cap: int = ORACLE_CAP) -> DenseMatrix:
    """Moore-Penrose pseudoinverse with singular values below 1e-12 * s_max cut off."""
    arr = as_dense(A, cap)
    if arr.size == 0:
        return arr.T.copy()
    return np.asarray(la.pinv(arr, atol=0.0, rtol=PINV_RTOL), dtype=np.float64)


def _check_invertible(block: DenseMatrix) -> None:
    if block.size == 0:
        return
    s = la.svdvals(block)
    if s[-1] <= SINGULAR_RTOL * max(s[0], np.finfo(float).tiny):
        raise SingularBlock(f"eliminated block is singular (sigma_min / sigma_max = {s[-1] / max(s[0], 1e-300):.3e})")


def exact_schur(A: DenseLike, part: Partition, cap: int = ORACLE_CAP) -> DenseMatrix:
    """
    Schur complement A_CC - A_CF A_FF^{-1} A_FC onto C.

    Raises:
        SingularBlock: If A_FF is singular.
    """
    arr = as_dense(A, cap)
    f, c = part.f, part.c
    a_cc = arr[np.ix_(c, c)]
    if part.n_f == 0:
        return a_cc
    a_ff = arr[np.ix_(f, f)]
    _check_invertible(a_ff)
    return a_cc - arr[np.ix_(c, f)] @ la.solve(a_ff, arr[np.ix_(f, c)])


def exact_pbe(
    L: DenseLike,
    part: Partition,
    k: int,
    cap: int = ORACLE_CAP,
) -> tuple[DenseMatrix, DenseMatrix]:
    """
    Exact partial block elimination after k rounds.

    Each round rebuilds L from the block form with D_FF on (F, F), -A_FC and
    -A_CF off the diagonal blocks and 2 L_CC on (C, C), then subtracts the
    one-step walk product A_{:,F} D_FF^{-1} A_{F,:}. A is refreshed as
    blockdiag(D_FF, Diag(L_CC)) - L. Both matrices stay in the original
    index order.

    Returns:
        (L^(k), A^(k)).

    Raises:
        SingularBlock: If a diagonal entry of D_FF is zero.
    """
    lap = as_dense(L, cap)
    f, c = part.f, part.c
    d_ff = np.diag(lap)[f].copy()
    if np.any(d_ff == 0):
        raise SingularBlock("D_FF has a zero diagonal entry")

    def reference_diag(current: DenseMatrix) -> DenseMatrix:
        ref = np.diag(current).copy()
        ref[f] = d_ff
        return np.diag(ref)

    lk = lap.copy()
    ak = reference_diag(lk) - lk
    for _ in range(k):
        nxt = np.zeros_like(lk)
        nxt[f, f] = d_ff
        nxt[np.ix_(f, c)] = -ak[np.ix_(f, c)]
        nxt[np.ix_(c, f)] = -ak[np.ix_(c, f)]
        nxt[np.ix_(c, c)] = 2.0 * lk[np.ix_(c, c)]
        nxt -= ak[:, f] @ (ak[f, :] / d_ff[:, None])
        lk = nxt
        ak = reference_diag(lk) - lk
    return lk, ak


def symmetrize(A: DenseMatrix) -> DenseMatrix:
    return 0.5 * (A + A.T)


def undirectify_dense(L: DenseMatrix) -> DenseMatrix:
    """(L + L^T - Diag((L + L^T) 1)) / 2."""
    sym = L + L.T
    return 0.5 * (sym - np.diag(sym.sum(axis=1)))


def _psd_eigh(U: DenseMatrix, tolerances: Tolerances) -> tuple[np.ndarray, np.ndarray]:
    scale = max(float(np.max(np.abs(U))) if U.size else 0.0, 1.0)
    if np.max(np.abs(U - U.T), initial=0.0) > tolerances.structural_tol * scale:
        raise NotPSD("matrix is not symmetric")
    w, V = la.eigh(symmetrize(U))
    if w.size and w[0] < -tolerances.psd_tol * max(abs(w[-1]), 1.0):
        raise NotPSD(f"matrix has negative eigenvalue {w[0]:.3e}")
    return w, V


@dataclass
class AsymMeasureReport:
    """Value of ||U^{+/2} A U^{+/2}||_2 plus whether A respects ker(U)."""

    value: float
    kernel_ok: bool
    kernel_dim: int


def asym_measure(
    A: DenseLike,
    U: DenseLike,
    tolerances: Tolerances | None = None,
    cap: int = ORACLE_CAP,
) -> AsymMeasureReport:
    """
    Asymmetric approximation measure ||U^{+/2} A U^{+/2}||_2.

    A satisfies A <~ delta U exactly when the value is <= delta and A maps
    ker(U) to zero from both sides; the latter is reported as `kernel_ok`.

    Raises:
        NotPSD: If U is not symmetric positive semidefinite.
    """
    tols = tolerances or Tolerances()
    a = as_dense(A, cap)
    u = as_dense(U, cap)
    if u.size == 0:
        return AsymMeasureReport(value=0.0, kernel_ok=True, kernel_dim=0)

    w, V = _psd_eigh(u, tols)
    cutoff = KERNEL_RTOL * max(float(w[-1]), np.finfo(float).tiny)
    range_mask = w > cutoff
    v_range = V[:, range_mask]
    v_kernel = V[:, ~range_mask]

    whiten = v_range / np.sqrt(w[range_mask])
    value = float(la.norm(whiten.T @ a @ whiten, 2)) if whiten.shape[1] else 0.0

    a_norm = max(float(la.norm(a, 2)), 1.0)
    kernel_ok = True
    if v_kernel.shape[1]:
        leak = max(float(la.norm(a @ v_kernel, 2)), float(la.norm(a.T @ v_kernel, 2)))
        kernel_ok = leak <= tols.psd_tol * a_norm
    return AsymMeasureReport(value=value, kernel_ok=kernel_ok, kernel_dim=int(v_kernel.shape[1]))


def lambda2(U: DenseLike, cap: int = ORACLE_CAP) -> float:
    """Second smallest eigenvalue of a symmetric matrix."""
    u = as_dense(U, cap)
    w = la.eigvalsh(symmetrize(u))
    return float(w[1]) if w.size > 1 else 0.0


def min_eig(X: DenseLike, cap: int = ORACLE_CAP) -> float:
    """Smallest eigenvalue of the symmetric part of X."""
    x = as_dense(X, cap)
    if x.size == 0:
        return 0.0
    return float(la.eigvalsh(symmetrize(x))[0])


def ones_projector(n: int) -> DenseMatrix:
    """Orthogonal projector onto the complement of the all-ones vector."""
    return np.eye(n) - np.full((n, n), 1.0 / n)


def loewner_gap(
    lower: DenseLike,
    upper: DenseLike,
    on_ones_complement: bool = False,
    cap: int = ORACLE_CAP,
) -> float:
    """
    Relative margin of lower <= upper in the Loewner order.

    Returns lambda_min(upper - lower) / max(1, ||upper||_2, ||lower||_2); a
    value >= -psd_tol certifies the ordering.
    """
    lo = symmetrize(as_dense(lower, cap))
    hi = symmetrize(as_dense(upper, cap))
    diff = hi - lo
    if on_ones_complement:
        proj = ones_projector(diff.shape[0])
        diff = proj @ diff @ proj
    scale = max(1.0, float(la.norm(hi, 2)), float(la.norm(lo, 2)))
    return min_eig(diff, cap) / scale


def u_norm(U: DenseLike, x: np.ndarray, cap: int = ORACLE_CAP) -> float:
    """Seminorm sqrt(x^T U x), clipped at zero."""
    u = as_dense(U, cap)
    return float(np.sqrt(max(float(x @ u @ x), 0.0)))


def scaled_laplacian_norm(L: DenseLike, cap: int = ORACLE_CAP) -> float:
    """||D^{-1/2} L D^{-1/2}||_2 for a Laplacian with positive diagonal."""
    lap = as_dense(L, cap)
    d = np.diag(lap)
    if np.any(d <= 0):
        raise SingularBlock("Laplacian has a vertex without out-edges")
    s = 1.0 / np.sqrt(d)
    return float(la.norm(s[:, None] * lap * s[None, :], 2))
