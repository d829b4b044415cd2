"""Degree-preserving sparsification of Eulerian Laplacians."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from rich.console import Console

from ..core import DirectedLaplacian, Partition, SparseMatrix
from .base import SparsifierBackend, SparsifierConfig, WeightBlock
from .rng import RngStream

RESIDUAL_RTOL = 1e-12


def output_budget(n: int, delta: float, config: SparsifierConfig) -> float:
    """Nonzero count the Eulerian sparsifier aims for on n vertices."""
    return config.oversample * n * config.log_factor(n) / delta**2


def sample_edge_weights(
    block: WeightBlock,
    delta: float,
    oversample: float,
    log_factor: float,
    generator: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Importance-sample edges of a weight block.

    Edge e = (src -> dst) is kept with probability
    p_e = min(1, c_s w_e (1/d_out(src) + 1/d_in(dst)) log(n) / delta^2)
    and reweighted by 1/p_e, so every kept weight is unbiased.

    Returns:
        (kept weights, probabilities), aligned with block.vals.
    """
    d_out = np.bincount(block.cols, weights=block.vals, minlength=block.n)
    d_in = np.bincount(block.rows, weights=block.vals, minlength=block.n)
    p = oversample * block.vals * (1.0 / d_out[block.cols] + 1.0 / d_in[block.rows])
    p = np.minimum(1.0, p * log_factor / delta**2)
    keep = generator.random(block.vals.size) < p
    kept = np.where(keep, block.vals / p, 0.0)
    return kept, p


def _clamp(kept: np.ndarray, sampled: np.ndarray, index: np.ndarray, limit: np.ndarray) -> np.ndarray:
    """Scale sampled weights so the per-index totals do not exceed `limit`."""
    n = limit.size
    fixed = np.bincount(index, weights=np.where(sampled, 0.0, kept), minlength=n)
    drawn = np.bincount(index, weights=np.where(sampled, kept, 0.0), minlength=n)
    room = np.maximum(limit - fixed, 0.0)
    factor = np.ones(n)
    over = drawn > room
    factor[over] = room[over] / drawn[over]
    return np.where(sampled, kept * factor[index], kept)


def _pair_residuals(
    out_res: np.ndarray,
    in_res: np.ndarray,
    tol: float,
) -> tuple[list[tuple[int, int, float]], float, int]:
    """
    Match out-weight deficits to in-weight deficits with new edges.

    Greedy north-west-corner transport in index order; a pairing of a
    vertex with itself is avoided by swapping in a later sink or source.

    Returns:
        (edges as (dst, src, weight), unmatched weight, vertex holding it).
    """
    sources = [[int(j), float(out_res[j])] for j in np.flatnonzero(out_res > tol)]
    sinks = [[int(i), float(in_res[i])] for i in np.flatnonzero(in_res > tol)]
    edges: list[tuple[int, int, float]] = []
    si = ti = 0
    while si < len(sources) and ti < len(sinks):
        src, amount_out = sources[si]
        dst, amount_in = sinks[ti]
        if src == dst:
            swap = next((t for t in range(ti + 1, len(sinks)) if sinks[t][0] != src), None)
            if swap is not None:
                sinks[ti], sinks[swap] = sinks[swap], sinks[ti]
                continue
            swap = next((s for s in range(si + 1, len(sources)) if sources[s][0] != dst), None)
            if swap is not None:
                sources[si], sources[swap] = sources[swap], sources[si]
                continue
            return edges, min(amount_out, amount_in), src
        amount = min(amount_out, amount_in)
        edges.append((dst, src, amount))
        sources[si][1] -= amount
        sinks[ti][1] -= amount
        if sources[si][1] <= tol:
            si += 1
        if sinks[ti][1] <= tol:
            ti += 1
    return edges, 0.0, -1


def _splice(
    rows: np.ndarray,
    cols: np.ndarray,
    vals: np.ndarray,
    vertex: int,
    amount: float,
    tol: float,
) -> tuple[np.ndarray, np.ndarray, np.ndarray] | None:
    """
    Give `vertex` extra in- and out-weight `amount` by splicing it into
    existing edges x -> y (x, y != vertex): x -> y loses weight, x -> vertex
    and vertex -> y gain it. Heaviest edges are used first.
    """
    vals = vals.copy()
    candidates = np.flatnonzero((rows != vertex) & (cols != vertex) & (vals > tol))
    candidates = candidates[np.argsort(-vals[candidates], kind="stable")]
    new_rows: list[int] = []
    new_cols: list[int] = []
    new_vals: list[float] = []
    remaining = amount
    for e in candidates:
        if remaining <= tol:
            break
        take = min(float(vals[e]), remaining)
        vals[e] -= take
        new_rows += [vertex, int(rows[e])]
        new_cols += [int(cols[e]), vertex]
        new_vals += [take, take]
        remaining -= take
    if remaining > tol:
        return None
    return (
        np.concatenate([rows, np.asarray(new_rows, dtype=np.int64)]),
        np.concatenate([cols, np.asarray(new_cols, dtype=np.int64)]),
        np.concatenate([vals, np.asarray(new_vals)]),
    )


def degree_patch(
    block: WeightBlock,
    d_out: np.ndarray,
    d_in: np.ndarray,
    tol: float,
) -> WeightBlock | None:
    """
    Add edges until every vertex has out-weight d_out and in-weight d_in.

    The block's own degrees must not exceed the targets. Deficits are paired
    into new edges; a deficit left on a single vertex is spliced into the
    heaviest edges around it. With R the total out-deficit, the patch adds
    net weight R and changes at most 3R in absolute weight. No self-loops are
    created and the diagonal of the Laplacian is untouched.

    Returns:
        The patched block, or None when the splice runs out of edges.
    """
    rows, cols, vals = block.rows, block.cols, block.vals
    out_res = d_out - np.bincount(cols, weights=vals, minlength=block.n)
    in_res = d_in - np.bincount(rows, weights=vals, minlength=block.n)

    edges, leftover, vertex = _pair_residuals(out_res, in_res, tol)
    if edges:
        dst, src, w = (np.asarray(col) for col in zip(*edges))
        rows = np.concatenate([rows, dst.astype(np.int64)])
        cols = np.concatenate([cols, src.astype(np.int64)])
        vals = np.concatenate([vals, w.astype(np.float64)])
    if leftover > tol:
        spliced = _splice(rows, cols, vals, vertex, leftover, tol)
        if spliced is None:
            return None
        rows, cols, vals = spliced

    merged = sp.coo_matrix((vals, (rows, cols)), shape=(block.n, block.n)).tocsr()
    merged.sum_duplicates()
    merged.eliminate_zeros()
    coo = merged.tocoo()
    return WeightBlock(coo.row.astype(np.int64), coo.col.astype(np.int64), coo.data, block.n)


class PassthroughBackend(SparsifierBackend):
    """Returns every block unchanged."""

    @property
    def name(self) -> str:
        return "passthrough"

    def sparsify_block(
        self,
        block: WeightBlock,
        delta: float,
        config: SparsifierConfig,
        generator: np.random.Generator,
    ) -> tuple[WeightBlock, bool]:
        return block, False


class SamplePatchBackend(SparsifierBackend):
    """
    Importance sampling followed by a degree patch.

    Sampled weights are clamped so no vertex overshoots its in- or out-degree,
    then the remaining deficits are paired into new edges. The result has
    exactly the input's in- and out-weight at every vertex.
    """

    @property
    def name(self) -> str:
        return "sample_patch"

    def sparsify_block(
        self,
        block: WeightBlock,
        delta: float,
        config: SparsifierConfig,
        generator: np.random.Generator,
    ) -> tuple[WeightBlock, bool]:
        if block.nnz == 0:
            return block, False
        kept, p = sample_edge_weights(
            block, delta, config.oversample, config.log_factor(block.n), generator
        )
        sampled = p < 1.0
        if not sampled.any():
            return block, False

        d_out = np.bincount(block.cols, weights=block.vals, minlength=block.n)
        d_in = np.bincount(block.rows, weights=block.vals, minlength=block.n)
        kept = _clamp(kept, sampled, block.cols, d_out)
        kept = _clamp(kept, sampled, block.rows, d_in)

        live = kept > 0
        sparse = WeightBlock(block.rows[live], block.cols[live], kept[live], block.n)
        tol = RESIDUAL_RTOL * max(float(d_out.max()), float(d_in.max()))
        patched = degree_patch(sparse, d_out, d_in, tol)
        if patched is None:
            return block, True
        return patched, False


_BACKENDS: dict[str, type[SparsifierBackend]] = {
    "passthrough": PassthroughBackend,
    "sample_patch": SamplePatchBackend,
}


def get_backend(name: str) -> SparsifierBackend:
    if name not in _BACKENDS:
        raise ValueError(f"Unknown sparsifier backend: {name}")
    return _BACKENDS[name]()


def _weight_block(L: DirectedLaplacian, mask: np.ndarray | None = None) -> WeightBlock:
    coo = L.edge_weights().csr.tocoo()
    rows, cols, vals = coo.row.astype(np.int64), coo.col.astype(np.int64), coo.data
    if mask is not None:
        rows, cols, vals = rows[mask], cols[mask], vals[mask]
    return WeightBlock(rows, cols, vals, L.n)


def _assemble(L: DirectedLaplacian, blocks: list[WeightBlock]) -> DirectedLaplacian:
    n = L.n
    weights = sp.csr_matrix((n, n))
    for block in blocks:
        weights = weights + sp.coo_matrix((block.vals, (block.rows, block.cols)), shape=(n, n))
    lap = sp.diags(L.diag, format="csr") - weights
    return DirectedLaplacian(SparseMatrix(lap), L.tolerances)


def _report_fallback(console: Console | None, where: str) -> None:
    if console is not None:
        console.print(f"[yellow]sparsifier: patch failed on {where}, block kept unsampled[/yellow]")


def spar_e(
    L: DirectedLaplacian,
    delta: float,
    rng: RngStream,
    config: SparsifierConfig | None = None,
    console: Console | None = None,
) -> DirectedLaplacian:
    """
    Sparsify an Eulerian Laplacian.

    The diagonal is kept exactly and every vertex keeps its in- and
    out-weight, so the result is Eulerian with the same degrees.
    """
    cfg = config or SparsifierConfig()
    L.require_eulerian("spar_e input")
    backend = get_backend(cfg.backend)
    block, fell_back = backend.sparsify_block(_weight_block(L), delta, cfg, rng.generator())
    if fell_back:
        _report_fallback(console, "the whole graph")
    return _assemble(L, [block])


def se(
    L: DirectedLaplacian,
    delta: float,
    part: Partition,
    rng: RngStream,
    config: SparsifierConfig | None = None,
    console: Console | None = None,
) -> DirectedLaplacian:
    """
    Sparsify the four (F, C) x (F, C) edge blocks of L independently.

    Keeps Diag(L) and the row and column sums inside every block, in
    particular those of the F block.
    """
    cfg = config or SparsifierConfig()
    backend = get_backend(cfg.backend)
    base = _weight_block(L)
    row_f = part.is_f[base.rows]
    col_f = part.is_f[base.cols]

    blocks: list[WeightBlock] = []
    for name, mask in (
        ("FF", row_f & col_f),
        ("FC", row_f & ~col_f),
        ("CF", ~row_f & col_f),
        ("CC", ~row_f & ~col_f),
    ):
        sub = WeightBlock(base.rows[mask], base.cols[mask], base.vals[mask], L.n)
        sparse_block, fell_back = backend.sparsify_block(sub, delta, cfg, rng.child(name).generator())
        if fell_back:
            _report_fallback(console, f"block {name}")
        blocks.append(sparse_block)
    return _assemble(L, blocks)
