"""Dense checks of the Laplacian inequalities the solver relies on."""

import numpy as np
import pytest

from src.core import Partition
from src.elimination import rcdd_partition
from src.oracle import exact_schur, lambda2, loewner_gap, scaled_laplacian_norm, undirectify_dense
from src.sparsify import RngStream

PSD_TOL = 1e-8
SEEDS = range(100)


def _instance(eulerian_factory, seed):
    n = 20 + (37 * seed) % 181
    return eulerian_factory(n, 6 * n, seed=seed)


@pytest.mark.parametrize("seed", SEEDS)
def test_walk_square_bounded_by_symmetrization(eulerian_factory, seed):
    """L^T D^{-1} L <= 2 U(L)."""
    L = _instance(eulerian_factory, seed).to_dense()
    lhs = L.T @ (L / np.diag(L)[:, None])
    assert loewner_gap(lhs, 2.0 * undirectify_dense(L), on_ones_complement=True) >= -PSD_TOL


@pytest.mark.parametrize("seed", SEEDS)
def test_degree_scaled_norm_at_most_two(eulerian_factory, seed):
    L = _instance(eulerian_factory, seed)
    assert scaled_laplacian_norm(L) <= 2.0 + 1e-9


@pytest.mark.parametrize("seed", SEEDS)
def test_schur_of_symmetrization_below_symmetrized_schur(eulerian_factory, seed):
    """sc(U(L), F) <= U(sc(L, F))."""
    lap = _instance(eulerian_factory, seed)
    part = rcdd_partition(lap, 0.25, RngStream(seed))
    L = lap.to_dense()
    lower = exact_schur(undirectify_dense(L), part)
    upper = undirectify_dense(exact_schur(L, part))
    assert loewner_gap(lower, upper) >= -PSD_TOL


@pytest.mark.parametrize("seed", SEEDS)
def test_symmetrized_schur_robust_for_rcdd_blocks(eulerian_factory, seed):
    """U(sc(L, F)) <= (3 + 2 / alpha) sc(U(L), F) when L_FF is alpha-RCDD."""
    alpha = 0.25
    lap = _instance(eulerian_factory, seed)
    part = rcdd_partition(lap, alpha, RngStream(seed))
    L = lap.to_dense()
    lower = undirectify_dense(exact_schur(L, part))
    upper = (3.0 + 2.0 / alpha) * exact_schur(undirectify_dense(L), part)
    assert loewner_gap(lower, upper) >= -PSD_TOL


@pytest.mark.parametrize("seed", SEEDS)
def test_schur_complements_compose(eulerian_factory, seed):
    """sc(sc(M, F1), F2) = sc(M, F1 u F2)."""
    lap = _instance(eulerian_factory, seed)
    n = lap.n
    M = lap.to_dense() + np.eye(n)
    gen = np.random.default_rng(seed)
    order = gen.permutation(n)
    f1 = np.sort(order[: n // 3])
    first = Partition.from_f(f1, n)
    f2_local = np.arange(0, first.n_c, 2)
    second = Partition.from_f(f2_local, first.n_c)

    two_step = exact_schur(exact_schur(M, first), second)
    one_step = exact_schur(M, Partition.from_f(np.concatenate([f1, first.c[f2_local]]), n))
    scale = np.abs(one_step).max()
    np.testing.assert_allclose(two_step, one_step, atol=1e-10 * scale)


@pytest.mark.parametrize("seed", SEEDS)
def test_schur_complement_keeps_fiedler_value(eulerian_factory, seed):
    """lambda_2(U) <= lambda_2(sc(U, F))."""
    lap = _instance(eulerian_factory, seed)
    part = rcdd_partition(lap, 0.25, RngStream(seed))
    U = undirectify_dense(lap.to_dense())
    before = lambda2(U)
    after = lambda2(exact_schur(U, part))
    assert before <= after + 1e-10 * max(after, 1.0)
