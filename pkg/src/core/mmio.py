"""Matrix Market and plain-text vector I/O."""

from pathlib import Path

import numpy as np
import scipy.io
import scipy.sparse as sp

from ..errors import InvalidInput
from .sparse import FloatArray, SparseMatrix


def read_matrix_market(path: str | Path) -> SparseMatrix:
    """Read a coordinate or array Matrix Market file as a SparseMatrix."""
    data = scipy.io.mmread(str(path))
    if sp.issparse(data):
        return SparseMatrix(sp.csr_matrix(data))
    return SparseMatrix.from_dense(np.asarray(data, dtype=np.float64))


def write_matrix_market(path: str | Path, A: SparseMatrix, comment: str = "") -> None:
    """
    Write A in general real coordinate format.

    Entries are emitted in row-major order with full double precision, so
    writing the same matrix twice yields identical bytes.
    """
    coo = sp.coo_matrix(A.csr)  # CSR is canonical, so entries come out sorted by (row, col)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    scipy.io.mmwrite(
        str(path),
        coo,
        comment=comment,
        field="real",
        precision=17,
        symmetry="general",
    )


def write_dense_matrix_market(path: str | Path, A: np.ndarray, comment: str = "") -> None:
    """Write a dense matrix in Matrix Market array format."""
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    scipy.io.mmwrite(
        str(path),
        np.asarray(A, dtype=np.float64),
        comment=comment,
        field="real",
        precision=17,
        symmetry="general",
    )


def read_dense_matrix_market(path: str | Path) -> FloatArray:
    data = scipy.io.mmread(str(path))
    if sp.issparse(data):
        data = data.toarray()
    return np.asarray(data, dtype=np.float64)


def read_vector(path: str | Path) -> FloatArray:
    """
    Read a vector from a single-column Matrix Market file or newline floats.

    Raises:
        InvalidInput: If the file holds a matrix with more than one column.
    """
    path = Path(path)
    with path.open() as fh:
        first = fh.readline()

    if first.startswith("%%MatrixMarket"):
        data = scipy.io.mmread(str(path))
        arr = data.toarray() if sp.issparse(data) else np.asarray(data)
        if arr.ndim == 2 and arr.shape[1] != 1:
            raise InvalidInput(f"{path} holds a {arr.shape} matrix, expected one column")
        return np.asarray(arr, dtype=np.float64).ravel()

    values = np.loadtxt(path, dtype=np.float64, ndmin=1)
    if values.ndim != 1:
        raise InvalidInput(f"{path} must contain one value per line")
    return values


def write_vector(path: str | Path, x: np.ndarray) -> None:
    """Write one float per line using repr precision."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(f"{float(v)!r}\n" for v in np.asarray(x).ravel()))
