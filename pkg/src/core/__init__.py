"""Sparse storage, directed Laplacians and partitions."""

from .laplacian import (
    INFINITE_MARGIN,
    NOT_RCDD,
    DirectedLaplacian,
    SymmetricPSD,
    build_laplacian,
    is_eulerian,
    is_rcdd,
    laplacian_from_weights,
    rcdd_margin,
    strongly_connected,
    symmetrize,
    undirectify,
)
from .mmio import (
    read_dense_matrix_market,
    read_matrix_market,
    read_vector,
    write_dense_matrix_market,
    write_matrix_market,
    write_vector,
)
from .partition import Partition
from .sparse import SparseMatrix, add, compact, restrict, spmv

__all__ = [
    "INFINITE_MARGIN",
    "NOT_RCDD",
    "DirectedLaplacian",
    "Partition",
    "SparseMatrix",
    "SymmetricPSD",
    "add",
    "build_laplacian",
    "compact",
    "is_eulerian",
    "is_rcdd",
    "laplacian_from_weights",
    "rcdd_margin",
    "read_dense_matrix_market",
    "read_matrix_market",
    "read_vector",
    "restrict",
    "spmv",
    "strongly_connected",
    "symmetrize",
    "undirectify",
    "write_dense_matrix_market",
    "write_matrix_market",
    "write_vector",
]
