"""Sparsified Schur complements by repeated partial block elimination."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from rich.console import Console

from ..config import Tolerances
from ..core import (
    NOT_RCDD,
    DirectedLaplacian,
    Partition,
    SparseMatrix,
    rcdd_margin,
    strongly_connected,
)
from ..errors import InvalidPartition, NotLaplacian, NumericDrift, PreconditionViolated, SingularBlock
from ..sparsify import RngStream, SparsifierConfig, output_budget, se, spar_e, sp_split, spar_p
from ..sparsify.product import product_samples
from .patch import PatchMatrix, patch_bound, patch_matrix

DENSE_PRODUCT_FILL = 0.3  # switch walk products to dense BLAS above this output fill
DECAY_RTOL = 1e-9


def schur_rounds(n: int, delta: float) -> int:
    """K = ceil(log2 log2(n / delta)) + 2."""
    return max(math.ceil(math.log2(math.log2(n / delta))), 0) + 2


@dataclass
class PbeState:
    """Approximate partial block elimination after `round` rounds."""

    round: int
    laplacian: SparseMatrix  # Ltt^(k)
    walk: SparseMatrix  # Att^(k) = blockdiag(D_FF, Diag(Ltt_CC)) - Ltt^(k)


@dataclass
class RoundRecord:
    round: int
    nnz: int
    eulerian_residual: float
    walk_decay: float  # ||D_FF^{-1} Att_FF||_inf


@dataclass
class SchurTrace:
    """Per-round diagnostics of one sparse_schur call."""

    rounds: int
    eps: float
    delta: float
    alpha: float
    d_ff: np.ndarray
    presparsified: bool = False
    records: list[RoundRecord] = field(default_factory=list)
    states: list[PbeState] = field(default_factory=list)
    final_walk: SparseMatrix | None = None
    s0: SparseMatrix | None = None
    patch: PatchMatrix | None = None
    patch_bound: float = math.inf
    strongly_connected: bool = True


@dataclass
class SchurResult:
    laplacian: DirectedLaplacian
    trace: SchurTrace


def _walk_matrix(ltt: sp.csr_matrix, part: Partition, d_ff: np.ndarray) -> sp.csr_matrix:
    ref = ltt.diagonal().copy()
    ref[part.f] = d_ff
    att = sp.diags(ref, format="csr") - ltt
    att.eliminate_zeros()
    return att.tocsr()


def _walk_decay(att: sp.csr_matrix, part: Partition, d_ff: np.ndarray) -> float:
    if part.n_f == 0:
        return 0.0
    rows = np.asarray(att[part.f][:, part.f].sum(axis=1)).ravel()
    return float(np.max(rows / d_ff))


def _block_form(
    att: sp.csr_matrix,
    ltt: sp.csr_matrix,
    part: Partition,
    d_ff: np.ndarray,
) -> sp.csr_matrix:
    """[[D_FF, -Att_FC], [-Att_CF, 2 Ltt_CC]] in the original index order."""
    n = part.n
    is_f = part.is_f
    a = att.tocoo()
    row_f, col_f = is_f[a.row], is_f[a.col]
    cross = row_f != col_f
    lt = ltt.tocoo()
    cc = ~is_f[lt.row] & ~is_f[lt.col]
    rows = np.concatenate([a.row[cross], lt.row[cc], part.f])
    cols = np.concatenate([a.col[cross], lt.col[cc], part.f])
    vals = np.concatenate([-a.data[cross], 2.0 * lt.data[cc], d_ff])
    return sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()


def _walk_products(
    att: sp.csr_matrix,
    part: Partition,
    d_ff: np.ndarray,
    eps: float,
    rng: RngStream,
    config: SparsifierConfig,
    onto_c: bool = False,
) -> sp.csr_matrix:
    """
    sum_{i in F} (1 / D_ii) * approx(Att_{:,i} Att_{i,:}).

    Products small enough to be cheaper exactly are summed with one sparse
    (or dense) matrix product; the others go through the product sparsifier,
    split over the (F, C) blocks unless `onto_c` restricts both sides to C.
    """
    col_f = att.tocsc()[:, part.f]
    row_f = att[part.f, :]
    if onto_c:
        col_f = col_f[part.c, :]
        row_f = row_f[:, part.c]
    col_f = sp.csc_matrix(col_f)
    row_f = sp.csr_matrix(row_f)
    n_rows, n_cols = col_f.shape[0], row_f.shape[1]

    x_nnz = np.diff(col_f.indptr)
    y_nnz = np.diff(row_f.indptr)
    if config.exact_products:
        exact = np.ones(part.n_f, dtype=bool)
    else:
        samples = np.array(
            [product_samples(int(a), int(b), eps, config) for a, b in zip(x_nnz, y_nnz)],
            dtype=np.float64,
        )
        exact = x_nnz.astype(np.float64) * y_nnz <= samples * (x_nnz + y_nnz)

    inv_d = 1.0 / d_ff
    picked = np.flatnonzero(exact)
    fill = float(np.sum(x_nnz[picked].astype(np.float64) * y_nnz[picked]))
    if fill > DENSE_PRODUCT_FILL * n_rows * n_cols:
        left = col_f[:, picked].toarray() * inv_d[picked][None, :]
        total = sp.csr_matrix(left @ row_f[picked, :].toarray())
    else:
        total = (col_f[:, picked] @ sp.diags(inv_d[picked]) @ row_f[picked, :]).tocsr()

    for t in np.flatnonzero(~exact):
        x = col_f[:, t].toarray().ravel() * inv_d[t]
        y = row_f[t, :].toarray().ravel()
        site = rng.child(int(part.f[t]))
        if onto_c:
            approx = spar_p(x, y, eps, site, config)
        else:
            approx = sp_split(x, y, eps, part, site, config)
        total = total + approx.csr
    return sp.csr_matrix(total)


def _checked_laplacian(mat: sp.csr_matrix, tolerances: Tolerances, what: str) -> DirectedLaplacian:
    try:
        lap = DirectedLaplacian(SparseMatrix(mat), tolerances)
    except NotLaplacian as exc:
        raise NumericDrift(f"{what}: {exc}") from exc
    if not lap.eulerian:
        raise NumericDrift(
            f"{what} is not Eulerian (relative ||L1||_inf = {lap.eulerian_residual:.3e})"
        )
    return lap


def sparse_schur_traced(
    L: DirectedLaplacian,
    part: Partition,
    delta: float,
    rng: RngStream,
    config: SparsifierConfig | None = None,
    rounds: int | None = None,
    keep_states: bool = False,
    console: Console | None = None,
) -> SchurResult:
    """
    Sparse approximation of the Schur complement of L onto C, with diagnostics.

    Runs K rounds of sparsified partial block elimination, truncates the
    remaining walk series after one more product, repairs the Eulerian
    property with a first-row/column patch and sparsifies the result.

    Args:
        L: Eulerian Laplacian.
        part: Partition with L_FF alpha-RCDD for some alpha > 0.
        delta: Target approximation error in (0, 1).
        rng: Random stream for every sampling step.
        config: Sparsifier configuration.
        rounds: Override for K.
        keep_states: Record every intermediate (Ltt, Att) pair in the trace.
        console: Receives sparsifier fallback and connectivity warnings.

    Raises:
        NotEulerian: If L is not Eulerian.
        PreconditionViolated: If L_FF is not RCDD or F or C is empty.
        NumericDrift: If an intermediate matrix loses the Eulerian property
            or the walk matrix stops decaying.
    """
    cfg = config or SparsifierConfig()
    tolerances = L.tolerances
    if not 0.0 < delta < 1.0:
        raise PreconditionViolated(f"delta must lie in (0, 1), got {delta}")
    if part.n != L.n:
        raise InvalidPartition(f"partition covers {part.n} vertices, Laplacian has {L.n}")
    if part.n_f == 0 or part.n_c == 0:
        raise PreconditionViolated("sparse_schur needs nonempty F and C")
    L.require_eulerian("sparse_schur input")

    alpha = rcdd_margin(L.restrict(part.f, part.f))
    if alpha == NOT_RCDD or alpha <= 0:
        raise PreconditionViolated(f"L_FF is not alpha-RCDD for any alpha > 0 (margin {alpha})")

    n = L.n
    k_rounds = rounds if rounds is not None else schur_rounds(n, delta)
    eps = delta / (8 * k_rounds)

    presparsified = L.nnz > output_budget(n, delta, cfg)
    if presparsified:
        L = spar_e(L, delta / 8, rng.child("presparsify"), cfg, console)
        alpha = rcdd_margin(L.restrict(part.f, part.f))
        if alpha == NOT_RCDD or alpha <= 0:
            raise NumericDrift("presparsified L_FF lost diagonal dominance")

    d_ff = L.diag[part.f].copy()
    if np.any(d_ff <= 0):
        raise SingularBlock("D_FF has a nonpositive diagonal entry")

    trace = SchurTrace(
        rounds=k_rounds,
        eps=eps,
        delta=delta,
        alpha=alpha,
        d_ff=d_ff,
        presparsified=presparsified,
    )

    ltt = L.mat.csr
    att = _walk_matrix(ltt, part, d_ff)
    decay = _walk_decay(att, part, d_ff)
    trace.records.append(RoundRecord(0, L.nnz, L.eulerian_residual, decay))
    if keep_states:
        trace.states.append(PbeState(0, L.mat, SparseMatrix(att)))

    contraction = 0.0 if math.isinf(alpha) else 1.0 / (1.0 + alpha)
    for k in range(1, k_rounds + 1):
        walks = _walk_products(att, part, d_ff, eps, rng.child("round", k, "products"), cfg)
        ltt0 = _block_form(att, ltt, part, d_ff) - walks
        lap0 = _checked_laplacian(ltt0, tolerances, f"round {k} elimination")
        lap = se(lap0, eps, part, rng.child("round", k, "se"), cfg, console)
        lap = _checked_laplacian(lap.mat.csr, tolerances, f"round {k} sparsified elimination")

        ltt = lap.mat.csr
        att = _walk_matrix(ltt, part, d_ff)
        new_decay = _walk_decay(att, part, d_ff)
        limit = min(decay**2, contraction ** (2**k))
        if new_decay > limit * (1 + DECAY_RTOL) + DECAY_RTOL * 1e-3:
            raise NumericDrift(
                f"round {k}: ||D_FF^-1 Att_FF||_inf = {new_decay:.3e} exceeds {limit:.3e}"
            )
        decay = new_decay
        trace.records.append(RoundRecord(k, lap.nnz, lap.eulerian_residual, decay))
        if keep_states:
            trace.states.append(PbeState(k, lap.mat, SparseMatrix(att)))

    trace.final_walk = SparseMatrix(att)
    tail = _walk_products(att, part, d_ff, eps, rng.child("final", "products"), cfg, onto_c=True)
    ltt_cc = ltt[part.c][:, part.c]
    s0 = SparseMatrix((ltt_cc - tail) / 2.0**k_rounds)
    patch = patch_matrix(s0)
    s_hat = _checked_laplacian((s0.csr + patch.mat.csr).tocsr(), tolerances, "patched Schur estimate")
    result = spar_e(s_hat, delta / 8, rng.child("final", "spar_e"), cfg, console)

    trace.s0 = s0
    trace.patch = patch
    trace.patch_bound = patch_bound(n, float(np.max(d_ff)), alpha, k_rounds)
    trace.strongly_connected = strongly_connected(result)
    if not trace.strongly_connected and console is not None:
        console.print("[yellow]sparse_schur: result is not strongly connected[/yellow]")
    return SchurResult(result, trace)


def sparse_schur(
    L: DirectedLaplacian,
    part: Partition,
    delta: float,
    rng: RngStream,
    config: SparsifierConfig | None = None,
    console: Console | None = None,
) -> DirectedLaplacian:
    """Sparse approximate Schur complement of L onto C (see sparse_schur_traced)."""
    return sparse_schur_traced(L, part, delta, rng, config, console=console).laplacian


def truncation_patch(trace: SchurTrace, part: Partition) -> np.ndarray:
    """
    Dense R_hat = R + 2^-K (Att_CF (D_FF - Att_FF)^-1 Att_FC - Att_CF D_FF^-1 Att_FC),
    the total error of truncating the walk series and patching.
    """
    if trace.final_walk is None or trace.patch is None:
        raise ValueError("trace is incomplete")
    att = trace.final_walk.to_dense()
    f, c = part.f, part.c
    a_ff = att[np.ix_(f, f)]
    a_fc = att[np.ix_(f, c)]
    a_cf = att[np.ix_(c, f)]
    d = np.diag(trace.d_ff)
    full = a_cf @ np.linalg.solve(d - a_ff, a_fc)
    truncated = a_cf @ (a_fc / trace.d_ff[:, None])
    return trace.patch.mat.to_dense() + (full - truncated) / 2.0**trace.rounds
