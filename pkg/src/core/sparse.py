"""Sparse matrix storage with mirrored row- and column-major views."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
import scipy.sparse as sp
from numpy.typing import ArrayLike, NDArray

FloatArray = NDArray[np.float64]
IndexArray = NDArray[np.int64]


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


class SparseMatrix:
    """
    Immutable real sparse matrix.

    Row-major storage is the source of truth (`row_ptr`, `col_idx`, `values`).
    The column-major mirror (`col_ptr`, `row_idx`) shares the same values through
    `value_perm`, so `values[value_perm]` lists the entries column by column.
    Duplicate coordinates are summed on construction and indices are sorted.
    """

    __slots__ = ("_csr", "_csc", "_value_perm")

    def __init__(self, matrix: sp.spmatrix | sp.sparray):
        csr = sp.csr_matrix(matrix, dtype=np.float64, copy=True)
        csr.sum_duplicates()
        csr.sort_indices()

        # Column-major mirror: carry CSR positions through the transpose-of-storage.
        positions = sp.csr_matrix(
            (np.arange(csr.nnz, dtype=np.float64), csr.indices.copy(), csr.indptr.copy()),
            shape=csr.shape,
        )
        pos_csc = positions.tocsc()
        pos_csc.sort_indices()
        value_perm = pos_csc.data.astype(np.int64)

        csc = sp.csc_matrix(
            (csr.data[value_perm], pos_csc.indices.copy(), pos_csc.indptr.copy()),
            shape=csr.shape,
        )

        self._csr = csr
        self._csc = csc
        self._value_perm = _freeze(value_perm)

    # Constructors

    @classmethod
    def from_coo(
        cls,
        rows: ArrayLike,
        cols: ArrayLike,
        vals: ArrayLike,
        shape: tuple[int, int],
    ) -> SparseMatrix:
        """Build from coordinate triplets; repeated (row, col) pairs are summed."""
        rows_arr = np.asarray(rows, dtype=np.int64)
        cols_arr = np.asarray(cols, dtype=np.int64)
        vals_arr = np.asarray(vals, dtype=np.float64)
        return cls(sp.coo_matrix((vals_arr, (rows_arr, cols_arr)), shape=shape))

    @classmethod
    def from_dense(cls, dense: ArrayLike) -> SparseMatrix:
        arr = np.atleast_2d(np.asarray(dense, dtype=np.float64))
        return cls(sp.csr_matrix(arr))

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int | None = None) -> SparseMatrix:
        return cls(sp.csr_matrix((n_rows, n_rows if n_cols is None else n_cols)))

    @classmethod
    def diag(cls, values: ArrayLike) -> SparseMatrix:
        vals = np.asarray(values, dtype=np.float64)
        return cls(sp.diags(vals, format="csr"))

    # Shape and storage

    @property
    def shape(self) -> tuple[int, int]:
        return (int(self._csr.shape[0]), int(self._csr.shape[1]))

    @property
    def n_rows(self) -> int:
        return self.shape[0]

    @property
    def n_cols(self) -> int:
        return self.shape[1]

    @property
    def nnz(self) -> int:
        return int(self._csr.nnz)

    @property
    def row_ptr(self) -> IndexArray:
        return self._csr.indptr

    @property
    def col_idx(self) -> IndexArray:
        return self._csr.indices

    @property
    def values(self) -> FloatArray:
        return self._csr.data

    @property
    def col_ptr(self) -> IndexArray:
        return self._csc.indptr

    @property
    def row_idx(self) -> IndexArray:
        return self._csc.indices

    @property
    def value_perm(self) -> IndexArray:
        return self._value_perm

    @property
    def csr(self) -> sp.csr_matrix:
        """Row-major scipy view. Treat as read-only."""
        return self._csr

    @property
    def csc(self) -> sp.csc_matrix:
        """Column-major scipy view. Treat as read-only."""
        return self._csc

    # Access

    def row(self, i: int) -> tuple[IndexArray, FloatArray]:
        """Column indices and values of row i."""
        start, stop = self._csr.indptr[i], self._csr.indptr[i + 1]
        return self._csr.indices[start:stop], self._csr.data[start:stop]

    def col(self, j: int) -> tuple[IndexArray, FloatArray]:
        """Row indices and values of column j."""
        start, stop = self._csc.indptr[j], self._csc.indptr[j + 1]
        return self._csc.indices[start:stop], self._csc.data[start:stop]

    def diagonal(self) -> FloatArray:
        return np.asarray(self._csr.diagonal(), dtype=np.float64)

    def row_sums(self) -> FloatArray:
        return np.asarray(self._csr.sum(axis=1), dtype=np.float64).ravel()

    def col_sums(self) -> FloatArray:
        return np.asarray(self._csc.sum(axis=0), dtype=np.float64).ravel()

    def to_dense(self) -> FloatArray:
        return np.asarray(self._csr.toarray(), dtype=np.float64)

    def transpose(self) -> SparseMatrix:
        return SparseMatrix(self._csr.T)

    @property
    def T(self) -> SparseMatrix:  # noqa: N802
        return self.transpose()

    def abs_max(self) -> float:
        return float(np.max(np.abs(self._csr.data))) if self.nnz else 0.0

    def check_mirror(self) -> bool:
        """Round-trip the column mirror back to rows and compare entrywise."""
        rebuilt = self._csc.tocsr()
        rebuilt.sort_indices()
        return bool(
            np.array_equal(rebuilt.indptr, self._csr.indptr)
            and np.array_equal(rebuilt.indices, self._csr.indices)
            and np.array_equal(rebuilt.data, self._csr.data)
            and np.array_equal(self._csr.data[self._value_perm], self._csc.data)
        )

    # Arithmetic helpers

    def spmv(self, x: ArrayLike) -> FloatArray:
        return spmv(self, x)

    def restrict(self, rows: Sequence[int] | IndexArray, cols: Sequence[int] | IndexArray) -> SparseMatrix:
        return restrict(self, rows, cols)

    def scaled(self, factor: float) -> SparseMatrix:
        return SparseMatrix(self._csr * factor)

    def __add__(self, other: SparseMatrix) -> SparseMatrix:
        return add(self, other)

    def __sub__(self, other: SparseMatrix) -> SparseMatrix:
        return add(self, other, 1.0, -1.0)

    def __matmul__(self, x: ArrayLike) -> FloatArray:
        return spmv(self, x)

    def __repr__(self) -> str:
        return f"SparseMatrix(shape={self.shape}, nnz={self.nnz})"


def restrict(A: SparseMatrix, rows: Sequence[int] | IndexArray, cols: Sequence[int] | IndexArray) -> SparseMatrix:
    """
    Submatrix A[rows, cols] in the order the indices are given.

    Raises:
        IndexError: If any index is outside the matrix.
    """
    row_arr = np.asarray(rows, dtype=np.int64).ravel()
    col_arr = np.asarray(cols, dtype=np.int64).ravel()
    n_rows, n_cols = A.shape
    if row_arr.size and (row_arr.min() < 0 or row_arr.max() >= n_rows):
        raise IndexError(f"row index out of range for {n_rows} rows")
    if col_arr.size and (col_arr.min() < 0 or col_arr.max() >= n_cols):
        raise IndexError(f"column index out of range for {n_cols} columns")
    return SparseMatrix(A.csr[row_arr][:, col_arr])


def spmv(A: SparseMatrix, x: ArrayLike) -> FloatArray:
    """Matrix-vector product A @ x."""
    vec = np.asarray(x, dtype=np.float64)
    if vec.shape[0] != A.n_cols:
        raise ValueError(f"vector length {vec.shape[0]} does not match {A.n_cols} columns")
    return np.asarray(A.csr @ vec, dtype=np.float64)


def add(A: SparseMatrix, B: SparseMatrix, alpha: float = 1.0, beta: float = 1.0) -> SparseMatrix:
    """alpha * A + beta * B."""
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch: {A.shape} vs {B.shape}")
    return SparseMatrix(alpha * A.csr + beta * B.csr)


def compact(A: SparseMatrix, tol: float = 0.0) -> SparseMatrix:
    """Drop stored entries with |value| <= tol."""
    csr = A.csr.copy()
    if tol > 0:
        csr.data[np.abs(csr.data) <= tol] = 0.0
    csr.eliminate_zeros()
    return SparseMatrix(csr)
