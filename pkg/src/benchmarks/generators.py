"""Families of strongly connected Eulerian test graphs."""

from __future__ import annotations

import math

import numpy as np

from ..core import DirectedLaplacian, build_laplacian
from ..errors import UsageError
from ..sparsify import RngStream

FAMILIES = ("cycle", "debruijn", "random_eulerian", "torus_flow")

MIN_CYCLE_LEN = 3
MAX_CYCLE_LEN = 20

Edge = tuple[int, int, float]


def _ring(vertices: np.ndarray, weight: float) -> list[Edge]:
    """Directed cycle through `vertices` in order, every edge with the same weight."""
    nxt = np.roll(vertices, -1)
    return [(int(u), int(v), weight) for u, v in zip(vertices, nxt)]


def cycle(n: int) -> DirectedLaplacian:
    """Unit-weight directed cycle 0 -> 1 -> ... -> n-1 -> 0."""
    if n < 3:
        raise UsageError(f"cycle needs n >= 3, got {n}")
    return build_laplacian(_ring(np.arange(n), 1.0), n)


def debruijn(n: int) -> DirectedLaplacian:
    """
    Binary de Bruijn graph on n = 2^k words: u -> (2u + b) mod n for b in {0, 1}.

    The two self-loops at the all-zero and all-one words are dropped, which
    keeps every vertex balanced.
    """
    k = int(round(math.log2(n))) if n > 0 else 0
    if n < 2 or 2**k != n:
        raise UsageError(f"debruijn needs n = 2^k with k >= 1, got {n}")
    edges: list[Edge] = []
    for u in range(n):
        for b in (0, 1):
            v = (2 * u + b) % n
            if v != u:
                edges.append((u, v, 1.0))
    return build_laplacian(edges, n)


def random_eulerian(n: int, m: int | None = None, seed: int = 0) -> DirectedLaplacian:
    """
    Superposition of random directed cycles.

    A Hamiltonian cycle over a random permutation makes the graph strongly
    connected; further cycles of random length in [3, 20], each with its own
    uniform weight in [1, 2), are added until about m edges are placed.
    """
    if n < 3:
        raise UsageError(f"random_eulerian needs n >= 3, got {n}")
    m = 4 * n if m is None else m
    if m < n:
        raise UsageError(f"random_eulerian needs m >= n, got m={m} n={n}")
    rng = RngStream(seed).child("gen", "random_eulerian", n).generator()

    edges = _ring(rng.permutation(n), float(rng.uniform(1.0, 2.0)))
    max_len = min(MAX_CYCLE_LEN, n)
    while len(edges) < m:
        length = int(rng.integers(MIN_CYCLE_LEN, max_len + 1))
        edges.extend(_ring(rng.choice(n, size=length, replace=False), float(rng.uniform(1.0, 2.0))))
    return build_laplacian(edges, n)


def torus_flow(n: int, seed: int = 0) -> DirectedLaplacian:
    """
    s x s torus (n = s^2) carrying one directed ring per row and per column.

    Each ring has its own weight in [1, 2), so the graph is Eulerian but not
    uniformly weighted.
    """
    s = math.isqrt(n)
    if s < 2 or s * s != n:
        raise UsageError(f"torus_flow needs a perfect square n >= 4, got {n}")
    rng = RngStream(seed).child("gen", "torus_flow", n).generator()
    grid = np.arange(n).reshape(s, s)
    edges: list[Edge] = []
    for row in grid:
        edges.extend(_ring(row, float(rng.uniform(1.0, 2.0))))
    for col in grid.T:
        edges.extend(_ring(col, float(rng.uniform(1.0, 2.0))))
    return build_laplacian(edges, n)


def gen(family: str, n: int, m: int | None = None, seed: int = 0) -> DirectedLaplacian:
    """
    Generate a strongly connected Eulerian Laplacian from a named family.

    Args:
        family: One of FAMILIES.
        n: Vertex count (2^k for debruijn, a perfect square for torus_flow).
        m: Target edge count for random_eulerian; ignored otherwise.
        seed: Seed for the randomised families.

    Raises:
        UsageError: On an unknown family or invalid parameters.
    """
    if family == "cycle":
        return cycle(n)
    if family == "debruijn":
        return debruijn(n)
    if family == "random_eulerian":
        return random_eulerian(n, m, seed)
    if family == "torus_flow":
        return torus_flow(n, seed)
    raise UsageError(f"unknown graph family {family!r}; choose from {', '.join(FAMILIES)}")


def random_rhs(n: int, seed: int = 0) -> np.ndarray:
    """Standard normal right-hand side with its mean removed."""
    b = RngStream(seed).child("rhs", n).generator().standard_normal(n)
    return b - b.mean()
