"""Tests for the Eulerian patch and sparsified Schur complements."""

import math

import numpy as np
import pytest
import scipy.sparse as sp

from src.core import Partition, SparseMatrix, build_laplacian, laplacian_from_weights, strongly_connected
from src.elimination import (
    patch_bound,
    patch_matrix,
    rcdd_partition,
    schur_rounds,
    sparse_schur,
    sparse_schur_traced,
    truncation_patch,
)
from src.errors import PreconditionViolated
from src.oracle import asym_measure, exact_schur, undirectify_dense
from src.sparsify import RngStream, SparsifierConfig

EXACT = SparsifierConfig(backend="passthrough", exact_products=True)

# =============================================================================
# Patch
# =============================================================================


def test_patch_corner_only():
    patch = patch_matrix(SparseMatrix.from_dense([[1.0, 0.0], [0.0, 0.0]]))
    np.testing.assert_allclose(patch.mat.to_dense(), [[-1.0, 0.0], [0.0, 0.0]])
    assert patch.norm == pytest.approx(1.0)


def test_patch_makes_sums_vanish():
    gen = np.random.default_rng(0)
    n = 8
    off = -gen.random((n, n)) * (gen.random((n, n)) < 0.5)
    np.fill_diagonal(off, 0.0)
    s0 = off + np.diag(1.0 - off.sum(axis=0) - off.sum(axis=1))
    patched = s0 + patch_matrix(SparseMatrix.from_dense(s0)).mat.to_dense()
    np.testing.assert_allclose(patched.sum(axis=0), 0.0, atol=1e-12)
    np.testing.assert_allclose(patched.sum(axis=1), 0.0, atol=1e-12)
    offdiag = patched[~np.eye(n, dtype=bool)]
    assert np.all(offdiag <= 1e-12)


def test_patch_of_laplacian_is_zero(cycle3):
    assert patch_matrix(cycle3.mat).norm == 0.0


def test_patch_rejects_negative_sums():
    with pytest.raises(PreconditionViolated):
        patch_matrix(SparseMatrix.from_dense([[1.0, 0.0], [0.0, -1.0]]))


def test_patch_bound():
    assert patch_bound(10, 1.0, math.inf, 3) == 0.0
    assert patch_bound(10, 1.0, 0.0, 3) == math.inf
    expected = 100 * 2.0 / (4 * 1.0) * 0.5**8
    assert patch_bound(10, 2.0, 1.0, 3) == pytest.approx(expected)


def test_schur_rounds():
    assert schur_rounds(3, 0.5) == 4
    assert schur_rounds(1024, 0.1) == math.ceil(math.log2(math.log2(10240))) + 2


# =============================================================================
# sparse_schur
# =============================================================================


def test_three_cycle_schur_complement(cycle3):
    part = Partition.from_f([0], 3)
    out = sparse_schur(cycle3, part, 0.5, RngStream(0), EXACT)
    np.testing.assert_allclose(out.to_dense(), [[1.0, -1.0], [-1.0, 1.0]], atol=1e-3)
    out = sparse_schur(cycle3, part, 0.5, RngStream(0))
    np.testing.assert_allclose(out.to_dense(), [[1.0, -1.0], [-1.0, 1.0]], atol=1e-3)


def test_single_coarse_vertex():
    triangle = build_laplacian([(i, j, 1.0) for i in range(3) for j in range(3) if i != j], 3)
    out = sparse_schur(triangle, Partition.from_f([0, 1], 3), 0.5, RngStream(0))
    assert out.n == 1
    np.testing.assert_allclose(out.to_dense(), [[0.0]], atol=1e-12)


def test_rejects_non_rcdd_block(cycle3):
    with pytest.raises(PreconditionViolated):
        sparse_schur(cycle3, Partition.from_f([0, 1], 3), 0.5, RngStream(0))
    with pytest.raises(PreconditionViolated):
        sparse_schur(cycle3, Partition.from_f([0], 3), 1.0, RngStream(0))


@pytest.mark.parametrize("seed", range(3))
def test_exact_error_is_the_truncation_patch(eulerian_factory, seed):
    L = eulerian_factory(60, 360, seed=seed)
    part = rcdd_partition(L, 0.25, RngStream(seed))
    result = sparse_schur_traced(L, part, 0.5, RngStream(seed), EXACT)
    exact = exact_schur(L.to_dense(), part)
    expected = exact + truncation_patch(result.trace, part)
    np.testing.assert_allclose(result.laplacian.to_dense(), expected, atol=1e-9 * np.abs(exact).max())
    assert result.trace.patch.norm <= result.trace.patch_bound


@pytest.mark.parametrize("seed", range(3))
def test_trace_records_decay(eulerian_factory, seed):
    L = eulerian_factory(80, 480, seed=seed)
    part = rcdd_partition(L, 0.25, RngStream(seed))
    result = sparse_schur_traced(L, part, 0.3, RngStream(seed), keep_states=True)
    trace = result.trace

    assert len(trace.records) == trace.rounds + 1
    assert len(trace.states) == trace.rounds + 1
    assert trace.eps == pytest.approx(0.3 / (8 * trace.rounds))
    decays = [r.walk_decay for r in trace.records]
    contraction = 1.0 / (1.0 + trace.alpha)
    for k in range(1, len(decays)):
        assert decays[k] <= decays[k - 1] ** 2 * (1 + 1e-9) + 1e-12
        assert decays[k] <= contraction ** (2**k) * (1 + 1e-9) + 1e-12
    for state in trace.states:
        np.testing.assert_allclose(state.laplacian.row_sums(), 0.0, atol=1e-9 * L.scale * 2**trace.rounds)
        np.testing.assert_allclose(state.laplacian.col_sums(), 0.0, atol=1e-9 * L.scale * 2**trace.rounds)


@pytest.mark.parametrize("seed", range(3))
def test_default_config_is_delta_accurate(eulerian_factory, seed):
    delta = 0.5
    L = eulerian_factory(150, 900, seed=seed)
    part = rcdd_partition(L, 0.25, RngStream(seed))
    out = sparse_schur(L, part, delta, RngStream(seed))
    exact = exact_schur(L.to_dense(), part)

    assert out.n == part.n_c
    assert out.eulerian
    assert strongly_connected(out)
    report = asym_measure(out.to_dense() - exact, undirectify_dense(exact))
    assert report.kernel_ok
    assert report.value <= delta


def test_low_oversampling_stays_eulerian(eulerian_factory):
    L = eulerian_factory(200, 6000, seed=1)
    part = rcdd_partition(L, 0.25, RngStream(1))
    cfg = SparsifierConfig(oversample=1.0)
    result = sparse_schur_traced(L, part, 0.9, RngStream(4), cfg)
    out = result.laplacian

    assert out.n == part.n_c
    assert out.eulerian
    assert np.all(out.diag > 0)
    rerun = sparse_schur(L, part, 0.9, RngStream(4), cfg)
    np.testing.assert_array_equal(rerun.to_dense(), out.to_dense())


def _heavy_cycle_graph(eulerian_factory, n: int, m: int, seed: int, weight: float):
    """Light random Eulerian edges under a heavy Hamiltonian cycle 0 -> 1 -> ... -> 0."""
    light = eulerian_factory(n, m, seed=seed).edge_weights().csr
    src = np.arange(n)
    heavy = sp.csr_matrix((np.full(n, weight), ((src + 1) % n, src)), shape=(n, n))
    return laplacian_from_weights(light + heavy)


@pytest.mark.parametrize("seed", range(3))
def test_presparsified_schur_drops_edges_within_delta(eulerian_factory, seed):
    delta = 0.9
    L = _heavy_cycle_graph(eulerian_factory, 200, 6000, seed, 1e4)
    part = rcdd_partition(L, 0.25, RngStream(seed))
    result = sparse_schur_traced(L, part, delta, RngStream(seed), SparsifierConfig(oversample=1.0))
    out = result.laplacian

    assert result.trace.presparsified
    assert result.trace.records[0].nnz < L.nnz / 2
    assert out.eulerian
    exact = exact_schur(L.to_dense(), part)
    report = asym_measure(out.to_dense() - exact, undirectify_dense(exact))
    assert report.kernel_ok
    assert report.value <= delta
