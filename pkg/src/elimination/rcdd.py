"""Random selection of large alpha-RCDD vertex subsets."""

import math

import numpy as np

from ..config import FIND_RCDD_MAX_ROUNDS
from ..core import DirectedLaplacian, Partition, rcdd_margin
from ..errors import PreconditionViolated, RetryExhausted
from ..sparsify import RngStream


def rcdd_target_size(n: int, alpha: float) -> float:
    """Lower bound n / (16 (1 + alpha)) on |F|."""
    return n / (16.0 * (1.0 + alpha))


def find_rcdd(
    L: DirectedLaplacian,
    alpha: float,
    rng: RngStream,
    max_rounds: int = FIND_RCDD_MAX_ROUNDS,
) -> np.ndarray:
    """
    Pick F such that L_FF is alpha-RCDD and |F| >= n / (16 (1 + alpha)).

    Each round samples every vertex with probability 1 / (4 (1 + alpha)) and
    then, in a single pass, discards sampled vertices whose in-F row or
    column mass exceeds L_ii / (1 + alpha). The masses are taken against the
    full sample, so removals never invalidate a survivor.

    Returns:
        Sorted vertex indices of F.

    Raises:
        PreconditionViolated: If alpha <= 0 or L has fewer than 2 vertices.
        RetryExhausted: If no round meets both conditions.
    """
    if not alpha > 0:
        raise PreconditionViolated(f"alpha must be positive, got {alpha}")
    n = L.n
    if n < 2:
        raise PreconditionViolated(f"find_rcdd needs at least 2 vertices, got {n}")

    weights = L.edge_weights().csr
    weights_t = weights.T.tocsr()
    limit = L.diag / (1.0 + alpha)
    prob = 1.0 / (4.0 * (1.0 + alpha))
    target = rcdd_target_size(n, alpha)

    for attempt in range(max_rounds):
        generator = rng.child("round", attempt).generator()
        sampled = generator.random(n) < prob
        if not sampled.any():
            continue
        indicator = sampled.astype(np.float64)
        row_mass = weights @ indicator
        col_mass = weights_t @ indicator
        keep = sampled & (row_mass <= limit) & (col_mass <= limit)
        f = np.flatnonzero(keep)
        if f.size < target or f.size == n:
            continue
        block = L.restrict(f, f)
        if rcdd_margin(block) >= alpha:
            return f

    raise RetryExhausted(
        f"find_rcdd found no alpha={alpha} RCDD set of size >= {math.ceil(target)} "
        f"in {max_rounds} rounds (n={n})"
    )


def rcdd_partition(L: DirectedLaplacian, alpha: float, rng: RngStream) -> Partition:
    return Partition.from_f(find_rcdd(L, alpha, rng), L.n)
