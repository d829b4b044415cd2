"""Tests for the product and Eulerian sparsifiers."""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.core import Partition, build_laplacian
from src.elimination import rcdd_partition
from src.errors import InvalidInput, NotEulerian
from src.oracle import asym_measure, undirectify_dense
from src.sparsify import (
    RngStream,
    SparsifierConfig,
    WeightBlock,
    degree_patch,
    get_backend,
    output_budget,
    product_samples,
    sample_edge_weights,
    se,
    sp_split,
    spar_e,
    spar_p,
)

LOOSE = SparsifierConfig(oversample=1.0, delta=0.5)

# =============================================================================
# Random streams and configuration
# =============================================================================


def test_rng_stream_is_keyed_by_path():
    root = RngStream(42)
    a = root.child("schur", 3).generator().random(4)
    b = root.child("schur", 3).generator().random(4)
    c = root.child("schur", 4).generator().random(4)
    np.testing.assert_array_equal(a, b)
    assert not np.allclose(a, c)
    assert not np.allclose(RngStream(43).child("schur", 3).generator().random(4), a)


def test_sparsifier_config_validation():
    with pytest.raises(ValidationError):
        SparsifierConfig(delta=1.0)
    with pytest.raises(ValidationError):
        SparsifierConfig(oversample=0.5)
    with pytest.raises(ValidationError):
        SparsifierConfig(failure_prob=0.0)
    assert SparsifierConfig(failure_prob=0.5).log_factor(10) == pytest.approx(math.log(20.0))


def test_unknown_backend():
    with pytest.raises(ValueError, match="Unknown sparsifier backend"):
        get_backend("fancy")
    assert get_backend("passthrough").name == "passthrough"


def test_budgets():
    cfg = SparsifierConfig(oversample=2.0)
    assert output_budget(100, 0.5, cfg) == pytest.approx(2.0 * 100 * math.log(100) / 0.25)
    assert product_samples(2, 2, 0.5, SparsifierConfig(oversample=1.0)) == math.ceil(math.log(4) / 0.25)


# =============================================================================
# Product sparsifier
# =============================================================================


def test_spar_p_zero_vector():
    out = spar_p(np.zeros(4), np.ones(3), 0.5, RngStream(0))
    assert out.shape == (4, 3)
    assert out.nnz == 0


def test_spar_p_unit_vectors_exact():
    out = spar_p(np.eye(3)[0], np.eye(3)[1], 0.5, RngStream(0))
    expected = np.zeros((3, 3))
    expected[0, 1] = 1.0
    np.testing.assert_array_equal(out.to_dense(), expected)


def test_spar_p_rejects_negative_entries():
    with pytest.raises(InvalidInput):
        spar_p(np.array([1.0, -1.0]), np.ones(2), 0.5, RngStream(0))


def test_spar_p_exact_products_flag():
    gen = np.random.default_rng(0)
    x, y = gen.random(50), gen.random(50)
    out = spar_p(x, y, 0.9, RngStream(0), SparsifierConfig(oversample=1.0, exact_products=True))
    np.testing.assert_allclose(out.to_dense(), np.outer(x, y))


def test_spar_p_sampled_preserves_margins():
    gen = np.random.default_rng(1)
    x, y = gen.random(200) + 0.01, gen.random(200) + 0.01
    cfg = SparsifierConfig(oversample=1.0)
    samples = product_samples(200, 200, 0.9, cfg)
    out = spar_p(x, y, 0.9, RngStream(5), cfg)

    assert out.nnz < 200 * 200
    assert out.nnz <= samples * (200 + 200 + 1)
    np.testing.assert_allclose(out.row_sums(), x * y.sum(), rtol=1e-9)
    np.testing.assert_allclose(out.col_sums(), y * x.sum(), rtol=1e-9)


def test_spar_p_is_unbiased_on_average():
    gen = np.random.default_rng(2)
    x, y = gen.random(30) + 0.1, gen.random(30) + 0.1
    cfg = SparsifierConfig(oversample=1.0)
    trials = 400
    mean = sum(spar_p(x, y, 0.9, RngStream(seed), cfg).to_dense() for seed in range(trials)) / trials
    exact = np.outer(x, y)
    assert np.linalg.norm(mean - exact) <= 0.25 * np.linalg.norm(exact)


def _product_graph_laplacian(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """U_G of the complete weighted graph W = x y^T, self-loops included."""
    w = np.outer(x, y)
    return (np.diag(w.sum(axis=1) + w.sum(axis=0)) - w - w.T) / 2.0


def test_spar_p_sampled_product_is_eps_accurate():
    n, eps = 50, 0.5
    x = y = np.full(n, 1.0 / math.sqrt(n))
    cfg = SparsifierConfig(oversample=1.0)
    u_g = _product_graph_laplacian(x, y)
    exact = np.outer(x, y)

    accurate = 0
    for seed in range(100):
        out = spar_p(x, y, eps, RngStream(seed), cfg)
        assert out.nnz < n * n
        report = asym_measure(out.to_dense() - exact, u_g)
        assert report.kernel_ok
        accurate += report.value <= eps
    # evenly spaced rotations fail every seed here
    assert accurate >= 80


def test_sp_split_unit_vectors_across_blocks():
    part = Partition.from_f([0], 3)
    out = sp_split(np.eye(3)[0], np.eye(3)[1], 0.5, part, RngStream(0))
    expected = np.zeros((3, 3))
    expected[0, 1] = 1.0
    np.testing.assert_array_equal(out.to_dense(), expected)


def test_sp_split_preserves_block_margins():
    n = 120
    gen = np.random.default_rng(3)
    x, y = gen.random(n) + 0.01, gen.random(n) + 0.01
    part = Partition.from_f(np.arange(0, n, 2), n)
    out = sp_split(x, y, 0.9, part, RngStream(7), SparsifierConfig(oversample=1.0)).to_dense()

    for rows in (part.f, part.c):
        for cols in (part.f, part.c):
            block = out[np.ix_(rows, cols)]
            np.testing.assert_allclose(block.sum(axis=1), x[rows] * y[cols].sum(), rtol=1e-9)
            np.testing.assert_allclose(block.sum(axis=0), y[cols] * x[rows].sum(), rtol=1e-9)


# =============================================================================
# Eulerian sparsifier
# =============================================================================


def test_sample_edge_weights_unbiased():
    rows = np.array([1, 2, 3, 0, 2, 0])
    cols = np.array([0, 1, 2, 3, 0, 2])
    vals = np.array([1.0, 2.0, 1.5, 0.5, 1.0, 3.0])
    block = WeightBlock(rows, cols, vals, 4)
    trials = 4000
    total = np.zeros(vals.size)
    for seed in range(trials):
        kept, p = sample_edge_weights(block, 0.9, 1.0, 0.5, np.random.default_rng(seed))
        total += kept
    assert np.all((p > 0) & (p <= 1))
    np.testing.assert_allclose(total / trials, vals, rtol=0.15)


def test_spar_e_passthrough_is_identity(eulerian_factory):
    L = eulerian_factory(50, 300, seed=1)
    out = spar_e(L, 0.5, RngStream(0), SparsifierConfig(backend="passthrough"))
    np.testing.assert_allclose(out.to_dense(), L.to_dense())


def test_spar_e_keeps_unsampled_graph(cycle3):
    out = spar_e(cycle3, 0.5, RngStream(0))
    np.testing.assert_allclose(out.to_dense(), cycle3.to_dense())


def test_spar_e_rejects_non_eulerian():
    path = build_laplacian([(0, 1, 1.0), (1, 2, 1.0)], 3)
    with pytest.raises(NotEulerian):
        spar_e(path, 0.5, RngStream(0))



def _degrees(block: WeightBlock) -> tuple[np.ndarray, np.ndarray]:
    d_out = np.bincount(block.cols, weights=block.vals, minlength=block.n)
    d_in = np.bincount(block.rows, weights=block.vals, minlength=block.n)
    return d_out, d_in


def _dense(block: WeightBlock) -> np.ndarray:
    out = np.zeros((block.n, block.n))
    np.add.at(out, (block.rows, block.cols), block.vals)
    return out


def test_degree_patch_closes_a_dropped_cycle_edge():
    # 0 -> 1 -> 2 -> 3 with 3 -> 0 dropped
    kept = WeightBlock(np.array([1, 2, 3]), np.array([0, 1, 2]), np.ones(3), 4)
    patched = degree_patch(kept, np.ones(4), np.ones(4), 1e-12)

    expected = _dense(kept)
    expected[0, 3] = 1.0
    np.testing.assert_allclose(_dense(patched), expected)


def test_degree_patch_splices_a_lone_deficit():
    # vertex 3 lacks both in- and out-weight, so no new edge can pair it
    kept = WeightBlock(np.array([1, 2, 0]), np.array([0, 1, 2]), np.ones(3), 4)
    target = np.array([1.0, 1.0, 1.0, 0.5])
    patched = degree_patch(kept, target, target, 1e-12)

    d_out, d_in = _degrees(patched)
    np.testing.assert_allclose(d_out, target)
    np.testing.assert_allclose(d_in, target)
    change = np.abs(_dense(patched) - _dense(kept)).sum()
    assert change == pytest.approx(1.5)
    assert np.all(np.diag(_dense(patched)) == 0.0)


def test_degree_patch_splice_needs_room():
    kept = WeightBlock(np.array([1]), np.array([0]), np.array([0.1]), 3)
    target = np.array([0.1, 0.1, 1.0])
    assert degree_patch(kept, target, target, 1e-12) is None


@pytest.mark.parametrize("seed", range(5))
def test_degree_patch_weight_is_bounded_by_deficit(eulerian_factory, seed):
    full = eulerian_factory(80, 800, seed=seed).edge_weights().csr.tocoo()
    gen = np.random.default_rng(seed)
    shrunk = full.data * gen.random(full.data.size) * (gen.random(full.data.size) < 0.5)
    kept = WeightBlock(full.row.astype(np.int64), full.col.astype(np.int64), shrunk, 80)
    target_out = np.bincount(full.col, weights=full.data, minlength=80)
    target_in = np.bincount(full.row, weights=full.data, minlength=80)
    deficit = float(target_out.sum() - shrunk.sum())

    patched = degree_patch(kept, target_out, target_in, 1e-12)

    d_out, d_in = _degrees(patched)
    np.testing.assert_allclose(d_out, target_out, rtol=1e-9)
    np.testing.assert_allclose(d_in, target_in, rtol=1e-9)
    assert np.all(patched.vals >= 0.0)
    assert np.all(patched.rows != patched.cols)
    added = patched.vals.sum() - shrunk.sum()
    assert added == pytest.approx(deficit, rel=1e-9)
    change = np.abs(_dense(patched) - _dense(kept)).sum()
    assert change <= 3.0 * deficit * (1 + 1e-9)

@pytest.mark.parametrize("seed", [0, 1, 2])
def test_spar_e_preserves_degrees(eulerian_factory, seed):
    L = eulerian_factory(200, 12000, seed=seed)
    out = spar_e(L, 0.9, RngStream(seed), SparsifierConfig(oversample=1.0))

    assert out.eulerian
    np.testing.assert_array_equal(out.diag, L.diag)
    w_in, w_out = L.edge_weights(), out.edge_weights()
    np.testing.assert_allclose(w_out.row_sums(), w_in.row_sums(), rtol=1e-9)
    np.testing.assert_allclose(w_out.col_sums(), w_in.col_sums(), rtol=1e-9)
    assert w_out.nnz < w_in.nnz
    assert np.all(w_out.values >= 0.0)



@pytest.mark.parametrize("seed", range(5))
def test_spar_e_drops_edges_within_delta(eulerian_factory, seed):
    delta = 0.9
    L = eulerian_factory(200, 12000, seed=seed)
    out = spar_e(L, delta, RngStream(seed), SparsifierConfig(oversample=1.0))

    assert out.nnz < L.nnz / 2
    dense = L.to_dense()
    report = asym_measure(out.to_dense() - dense, undirectify_dense(dense))
    assert report.kernel_ok
    assert report.value <= delta

def test_spar_e_is_reproducible(eulerian_factory):
    L = eulerian_factory(200, 12000, seed=4)
    first = spar_e(L, 0.9, RngStream(11), LOOSE)
    second = spar_e(L, 0.9, RngStream(11), LOOSE)
    np.testing.assert_array_equal(first.to_dense(), second.to_dense())


def test_se_three_cycle_unchanged(cycle3):
    out = se(cycle3, 0.5, Partition.from_f([0], 3), RngStream(0))
    np.testing.assert_allclose(out.to_dense(), cycle3.to_dense())


def test_se_preserves_every_block_margin(eulerian_factory):
    L = eulerian_factory(200, 12000, seed=6)
    part = rcdd_partition(L, 0.25, RngStream(6))
    out = se(L, 0.9, part, RngStream(3), SparsifierConfig(oversample=1.0))

    np.testing.assert_array_equal(out.diag, L.diag)
    before = L.edge_weights().to_dense()
    after = out.edge_weights().to_dense()
    for rows in (part.f, part.c):
        for cols in (part.f, part.c):
            b, a = before[np.ix_(rows, cols)], after[np.ix_(rows, cols)]
            np.testing.assert_allclose(a.sum(axis=1), b.sum(axis=1), rtol=1e-9, atol=1e-9)
            np.testing.assert_allclose(a.sum(axis=0), b.sum(axis=0), rtol=1e-9, atol=1e-9)


@pytest.mark.parametrize("seed", range(5))
def test_se_drops_edges_within_delta(eulerian_factory, seed):
    delta = 0.9
    L = eulerian_factory(200, 12000, seed=seed)
    part = rcdd_partition(L, 0.25, RngStream(seed))
    out = se(L, delta, part, RngStream(seed + 100), SparsifierConfig(oversample=1.0))

    assert out.nnz < L.nnz
    dense = L.to_dense()
    report = asym_measure(out.to_dense() - dense, undirectify_dense(dense))
    assert report.kernel_ok
    assert report.value <= delta
