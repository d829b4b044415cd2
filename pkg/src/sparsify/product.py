"""Sparse approximations of rank-one products x y^T."""

from __future__ import annotations

import math

import numpy as np
import scipy.sparse as sp

from ..core import Partition, SparseMatrix
from ..errors import InvalidInput
from .base import SparsifierConfig
from .rng import RngStream


def product_samples(nnz_x: int, nnz_y: int, eps: float, config: SparsifierConfig) -> int:
    """Number of coupling rotations used for one product."""
    return math.ceil(config.oversample * config.log_factor(nnz_x + nnz_y) / eps**2)


def _cumulative(weights: np.ndarray) -> np.ndarray:
    bounds = np.concatenate([[0.0], np.cumsum(weights / weights.sum())])
    bounds[-1] = 1.0
    return bounds


def _rotation_coupling(
    xv: np.ndarray,
    yv: np.ndarray,
    samples: int,
    generator: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Random rotation coupling of two weight vectors.

    x and y are laid out as consecutive intervals on the unit circle in
    random order. For each of s independent uniform rotations theta_k, every overlap of
    the x-interval i with the y-interval j shifted by theta_k becomes an
    entry (i, j) of weight |overlap| * X * Y / s. Each x-interval is covered
    exactly once per rotation, so row sums equal x_i * Y and column sums
    equal y_j * X; a uniform rotation makes every entry unbiased. Evenly
    spaced rotations would alias: on near-uniform vectors the coupled matrix
    is a circulant whose frequency-s mode never averages out.
    """
    order_x = generator.permutation(xv.size)
    order_y = generator.permutation(yv.size)
    a = _cumulative(xv[order_x])
    b = _cumulative(yv[order_y])
    thetas = generator.random(samples)

    inner_a = np.broadcast_to(a[1:-1], (samples, a.size - 2))
    shifted_b = (b[None, :-1] + thetas[:, None]) % 1.0  # b[0] + theta marks a y-boundary too
    points = np.concatenate(
        [np.zeros((samples, 1)), inner_a, shifted_b, np.ones((samples, 1))], axis=1
    )
    points.sort(axis=1)
    lengths = np.diff(points, axis=1)
    mids = 0.5 * (points[:, 1:] + points[:, :-1])

    keep = lengths > 0
    lengths = lengths[keep]
    rot = np.broadcast_to(thetas[:, None], mids.shape)[keep]
    mids = mids[keep]

    xi = np.clip(np.searchsorted(a, mids, side="right") - 1, 0, xv.size - 1)
    yj = np.clip(np.searchsorted(b, (mids - rot) % 1.0, side="right") - 1, 0, yv.size - 1)
    scale = xv.sum() * yv.sum() / samples
    return order_x[xi], order_y[yj], lengths * scale


def spar_p(
    x: np.ndarray,
    y: np.ndarray,
    eps: float,
    rng: RngStream,
    config: SparsifierConfig | None = None,
) -> SparseMatrix:
    """
    Sparse unbiased approximation of the outer product x y^T.

    x and y must be nonnegative. Row sums of the result equal x (1^T y) and
    column sums equal y (1^T x). The exact product is returned when it is
    no larger than the sampled one or when exact products are configured.
    """
    cfg = config or SparsifierConfig()
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if np.any(xa < 0) or np.any(ya < 0):
        raise InvalidInput("spar_p requires nonnegative vectors")
    shape = (xa.size, ya.size)
    sx = np.flatnonzero(xa)
    sy = np.flatnonzero(ya)
    if sx.size == 0 or sy.size == 0:
        return SparseMatrix.zeros(*shape)

    samples = product_samples(sx.size, sy.size, eps, cfg)
    if cfg.exact_products or sx.size * sy.size <= samples * (sx.size + sy.size):
        outer = np.outer(xa[sx], ya[sy])
        rows = np.repeat(sx, sy.size)
        cols = np.tile(sy, sx.size)
        return SparseMatrix.from_coo(rows, cols, outer.ravel(), shape)

    xi, yj, vals = _rotation_coupling(xa[sx], ya[sy], samples, rng.generator())
    return SparseMatrix(sp.coo_matrix((vals, (sx[xi], sy[yj])), shape=shape))


def sp_split(
    x: np.ndarray,
    y: np.ndarray,
    eps: float,
    part: Partition,
    rng: RngStream,
    config: SparsifierConfig | None = None,
) -> SparseMatrix:
    """
    Approximate x y^T block by block over (F, C) x (F, C).

    Each of the four blocks is sparsified independently, so row and column
    sums inside every block are preserved.
    """
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    total = SparseMatrix.zeros(xa.size, ya.size).csr
    for row_name, row_mask in (("F", part.is_f), ("C", ~part.is_f)):
        for col_name, col_mask in (("F", part.is_f), ("C", ~part.is_f)):
            block = spar_p(
                np.where(row_mask, xa, 0.0),
                np.where(col_mask, ya, 0.0),
                eps,
                rng.child(row_name + col_name),
                config,
            )
            total = total + block.csr
    return SparseMatrix(total)
