"""Directed and undirected Laplacians, Eulerian checks and RCDD margins."""

from __future__ import annotations

import math
from collections.abc import Iterable

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from ..config import Tolerances
from ..errors import InvalidEdge, NotEulerian, NotLaplacian
from .sparse import FloatArray, SparseMatrix

INFINITE_MARGIN = math.inf
NOT_RCDD = -math.inf

Edge = tuple[int, int, float]  # (src, dst, weight), 0-based


def _scale(diag: FloatArray) -> float:
    return float(np.max(np.abs(diag))) if diag.size else 0.0


class DirectedLaplacian:
    """
    Directed Laplacian L = D_out - A^T of a weighted digraph.

    Column j holds the out-edges of vertex j: L[i, j] = -w(j -> i) and
    L[j, j] is the out-degree of j, so every column sums to zero. The
    matrix is Eulerian when its rows also sum to zero.
    """

    def __init__(
        self,
        mat: SparseMatrix,
        tolerances: Tolerances | None = None,
        check: bool = True,
    ):
        if mat.n_rows != mat.n_cols:
            raise NotLaplacian(f"Laplacian must be square, got shape {mat.shape}")
        self.mat = mat
        self.tolerances = tolerances or Tolerances()
        self._diag = mat.diagonal()
        self._row_sums = mat.row_sums()
        self._col_sums = mat.col_sums()
        if check:
            self._validate()

    def _validate(self) -> None:
        tol = self.tolerances.structural_tol * max(self.scale, 1.0)
        coo = self.mat.csr.tocoo()
        off = coo.row != coo.col
        if off.any() and float(coo.data[off].max()) > tol:
            raise NotLaplacian(
                f"positive off-diagonal entry {float(coo.data[off].max()):.3e}"
            )
        if self.n and float(np.max(np.abs(self._col_sums))) > tol:
            raise NotLaplacian(
                f"column sums not zero (max |1^T L| = {float(np.max(np.abs(self._col_sums))):.3e})"
            )

    @property
    def n(self) -> int:
        return self.mat.n_rows

    @property
    def nnz(self) -> int:
        return self.mat.nnz

    @property
    def diag(self) -> FloatArray:
        return self._diag

    @property
    def row_sums(self) -> FloatArray:
        return self._row_sums

    @property
    def col_sums(self) -> FloatArray:
        return self._col_sums

    @property
    def scale(self) -> float:
        """Largest degree, the reference magnitude for tolerances."""
        return _scale(self._diag)

    @property
    def eulerian_residual(self) -> float:
        """||L 1||_inf relative to the largest degree."""
        if self.n == 0:
            return 0.0
        return float(np.max(np.abs(self._row_sums))) / max(self.scale, np.finfo(float).tiny)

    @property
    def eulerian(self) -> bool:
        return self.eulerian_residual <= self.tolerances.structural_tol

    def require_eulerian(self, what: str = "Laplacian") -> None:
        if not self.eulerian:
            raise NotEulerian(
                f"{what} is not Eulerian (relative ||L1||_inf = {self.eulerian_residual:.3e})"
            )

    def to_dense(self) -> FloatArray:
        return self.mat.to_dense()

    def spmv(self, x: np.ndarray) -> FloatArray:
        return self.mat.spmv(x)

    def restrict(self, rows: np.ndarray, cols: np.ndarray) -> SparseMatrix:
        return self.mat.restrict(rows, cols)

    def edge_weights(self) -> SparseMatrix:
        """Nonnegative off-diagonal weights W with W[i, j] = w(j -> i)."""
        csr = -self.mat.csr
        csr = csr - sp.diags(csr.diagonal())
        csr.eliminate_zeros()
        return SparseMatrix(csr)

    def __repr__(self) -> str:
        return f"DirectedLaplacian(n={self.n}, nnz={self.nnz}, eulerian={self.eulerian})"


class SymmetricPSD:
    """Symmetric positive semidefinite matrix in sparse storage."""

    def __init__(self, mat: SparseMatrix, tolerances: Tolerances | None = None):
        self.mat = mat
        tol = (tolerances or Tolerances()).structural_tol * max(mat.abs_max(), 1.0)
        asym = abs(mat.csr - mat.csr.T)
        if asym.nnz and float(asym.max()) > tol:
            raise NotLaplacian(f"matrix is not symmetric (max asymmetry {float(asym.max()):.3e})")

    @property
    def n(self) -> int:
        return self.mat.n_rows

    def to_dense(self) -> FloatArray:
        return self.mat.to_dense()

    def quad(self, x: np.ndarray) -> float:
        """x^T U x."""
        return float(x @ self.mat.spmv(x))


def build_laplacian(
    edges: Iterable[Edge],
    n: int,
    tolerances: Tolerances | None = None,
) -> DirectedLaplacian:
    """
    Assemble the directed Laplacian of a weighted edge list.

    Duplicate edges are merged by summing weights. Degrees are computed from
    the merged off-diagonal matrix so that every column sums to zero.

    Raises:
        InvalidEdge: On self-loops, out-of-range endpoints or non-positive weights.
    """
    edge_list = list(edges)
    if n < 1:
        raise InvalidEdge(f"vertex count must be positive, got {n}")

    src = np.fromiter((e[0] for e in edge_list), dtype=np.int64, count=len(edge_list))
    dst = np.fromiter((e[1] for e in edge_list), dtype=np.int64, count=len(edge_list))
    w = np.fromiter((e[2] for e in edge_list), dtype=np.float64, count=len(edge_list))

    if src.size:
        if src.min() < 0 or dst.min() < 0 or src.max() >= n or dst.max() >= n:
            raise InvalidEdge(f"edge endpoint outside [0, {n})")
        loops = np.flatnonzero(src == dst)
        if loops.size:
            raise InvalidEdge(f"self-loop at vertex {int(src[loops[0]])}")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise InvalidEdge("edge weights must be finite and positive")

    weights = sp.csr_matrix((w, (dst, src)), shape=(n, n))
    weights.sum_duplicates()
    return laplacian_from_weights(weights, tolerances)


def laplacian_from_weights(
    weights: sp.spmatrix | SparseMatrix,
    tolerances: Tolerances | None = None,
    check: bool = True,
) -> DirectedLaplacian:
    """Laplacian Diag(1^T W) - W of a nonnegative weight matrix with zero diagonal."""
    csr = weights.csr if isinstance(weights, SparseMatrix) else sp.csr_matrix(weights)
    out_deg = np.asarray(csr.sum(axis=0)).ravel()
    return DirectedLaplacian(SparseMatrix(sp.diags(out_deg, format="csr") - csr), tolerances, check)


def is_eulerian(L: DirectedLaplacian, tolerances: Tolerances | None = None) -> bool:
    """Whether ||L 1||_inf <= structural_tol * max degree."""
    tol = (tolerances or L.tolerances).structural_tol
    return L.eulerian_residual <= tol


def symmetrize(L: DirectedLaplacian | SparseMatrix) -> SparseMatrix:
    """(A + A^T) / 2."""
    mat = L.mat if isinstance(L, DirectedLaplacian) else L
    return SparseMatrix(0.5 * (mat.csr + mat.csr.T))


def undirectify(L: DirectedLaplacian) -> SymmetricPSD:
    """
    Undirected Laplacian U(L) = (L + L^T - Diag((L + L^T) 1)) / 2.

    For Eulerian inputs this coincides with (L + L^T) / 2.
    """
    sym = L.mat.csr + L.mat.csr.T
    correction = np.asarray(sym.sum(axis=1)).ravel()
    u = 0.5 * (sym - sp.diags(correction))
    return SymmetricPSD(SparseMatrix(u), L.tolerances)


def rcdd_margin(A: SparseMatrix | DirectedLaplacian, tol: float = 1e-12) -> float:
    """
    Largest alpha such that A is alpha-RCDD.

    Each row i needs A_ii >= (1 + alpha) * max(sum_{j != i} |A_ij|, sum_{j != i} |A_ji|).
    Rows and columns with no off-diagonal mass do not constrain alpha.

    Returns:
        The margin, INFINITE_MARGIN when no off-diagonal mass exists, or
        NOT_RCDD when some row is not diagonally dominant.
    """
    mat = A.mat if isinstance(A, DirectedLaplacian) else A
    if mat.n_rows == 0:
        return INFINITE_MARGIN
    absm = abs(mat.csr)
    diag = mat.diagonal()
    off_row = np.asarray(absm.sum(axis=1)).ravel() - np.abs(diag)
    off_col = np.asarray(absm.sum(axis=0)).ravel() - np.abs(diag)
    off = np.maximum(np.maximum(off_row, off_col), 0.0)

    scale = max(float(np.max(np.abs(diag))), float(np.max(off)), np.finfo(float).tiny)
    constrained = off > tol * scale
    if not constrained.any():
        return INFINITE_MARGIN
    margins = diag[constrained] / off[constrained] - 1.0
    alpha = float(np.min(margins))
    if alpha < -tol * 1e3:
        return NOT_RCDD
    return max(alpha, 0.0)


def is_rcdd(A: SparseMatrix | DirectedLaplacian, alpha: float) -> bool:
    return rcdd_margin(A) >= alpha


def strongly_connected(L: DirectedLaplacian | SparseMatrix) -> bool:
    """Whether the support digraph of L has a single strong component."""
    mat = L.mat if isinstance(L, DirectedLaplacian) else L
    if mat.n_rows <= 1:
        return True
    pattern = abs(mat.csr)
    n_components, _ = connected_components(pattern, directed=True, connection="strong")
    return bool(n_components == 1)
