"""Tests for the dense reference computations."""

import math

import numpy as np
import pytest

from src.core import Partition, build_laplacian, undirectify
from src.elimination import rcdd_partition
from src.errors import NotPSD, NumericError, SingularBlock, TooLarge
from src.oracle import (
    as_dense,
    asym_measure,
    exact_pbe,
    exact_schur,
    lambda2,
    loewner_gap,
    min_eig,
    ones_projector,
    pinv,
    u_norm,
    undirectify_dense,
)
from src.sparsify import RngStream

from .conftest import CYCLE3_DENSE


def test_as_dense_caps_and_rejects_non_finite():
    with pytest.raises(TooLarge):
        as_dense(np.zeros((5, 5)), cap=3)
    with pytest.raises(NumericError):
        as_dense(np.array([[1.0, np.nan], [0.0, 1.0]]))


def test_pinv_examples(cycle3):
    np.testing.assert_allclose(pinv(np.array([[1.0, -1.0], [-1.0, 1.0]])), [[0.25, -0.25], [-0.25, 0.25]])
    np.testing.assert_allclose(pinv(np.eye(3)), np.eye(3))
    np.testing.assert_allclose(CYCLE3_DENSE @ pinv(cycle3), ones_projector(3), atol=1e-12)


def test_exact_schur_three_cycle(cycle3):
    part = Partition.from_f([0], 3)
    np.testing.assert_allclose(exact_schur(cycle3, part), [[1.0, -1.0], [-1.0, 1.0]], atol=1e-14)


def test_exact_schur_block_diagonal_untouched():
    A = np.zeros((4, 4))
    A[:2, :2] = [[2.0, -1.0], [-1.0, 2.0]]
    A[2:, 2:] = [[3.0, 1.0], [0.5, 4.0]]
    np.testing.assert_allclose(exact_schur(A, Partition.from_f([0, 1], 4)), A[2:, 2:])


def test_exact_schur_four_cycle_opposite_vertices():
    L = build_laplacian([(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0),
                         (1, 0, 1.0), (2, 1, 1.0), (3, 2, 1.0), (0, 3, 1.0)], 4)
    sc = exact_schur(L, Partition.from_f([0, 2], 4))
    # two parallel paths of conductance 1/2 each
    np.testing.assert_allclose(sc, [[1.0, -1.0], [-1.0, 1.0]], atol=1e-14)


def test_exact_schur_singular_block():
    with pytest.raises(SingularBlock):
        exact_schur(np.array([[0.0, 0.0], [0.0, 1.0]]), Partition.from_f([0], 2))


def test_exact_pbe_three_cycle(cycle3):
    part = Partition.from_f([0], 3)
    l0, _ = exact_pbe(cycle3, part, 0)
    np.testing.assert_allclose(l0, CYCLE3_DENSE)

    l1, a1 = exact_pbe(cycle3, part, 1)
    np.testing.assert_allclose(l1, [[1.0, 0.0, -1.0], [-1.0, 2.0, -1.0], [0.0, -2.0, 2.0]], atol=1e-14)
    np.testing.assert_allclose(l1.sum(axis=0), 0.0, atol=1e-14)
    np.testing.assert_allclose(l1.sum(axis=1), 0.0, atol=1e-14)
    np.testing.assert_allclose(exact_schur(l1, part), 2.0 * exact_schur(cycle3, part), atol=1e-14)
    # the F block of A is already zero: no F-F walks in a cycle
    assert a1[0, 0] == 0.0


@pytest.mark.parametrize("n", [10, 50, 200])
@pytest.mark.parametrize("seed", range(10))
def test_exact_pbe_doubles_schur_complement(eulerian_factory, n, seed):
    L = eulerian_factory(n, 5 * n, seed=seed)
    dense = L.to_dense()
    part = rcdd_partition(L, 0.25, RngStream(seed))
    base = exact_schur(dense, part)
    for k in range(1, 6):
        lk, _ = exact_pbe(dense, part, k)
        gap = np.linalg.norm(exact_schur(lk, part) - 2.0**k * base)
        assert gap <= 1e-9 * 2.0**k * np.linalg.norm(base)


@pytest.mark.parametrize("seed", range(5))
def test_scaled_cc_block_approaches_schur_complement(eulerian_factory, seed):
    L = eulerian_factory(30, 150, seed=seed)
    dense = L.to_dense()
    part = rcdd_partition(L, 0.25, RngStream(seed))
    target = exact_schur(dense, part)
    c = part.c
    errors = []
    for k in range(11):
        lk, _ = exact_pbe(dense, part, k)
        errors.append(np.linalg.norm(lk[np.ix_(c, c)] / 2.0**k - target))

    tail = errors[4:]
    assert all(later <= earlier * (1 + 1e-9) for earlier, later in zip(tail, tail[1:]))
    assert errors[10] <= errors[4] / 16


def test_asym_measure_examples(cycle3):
    U = undirectify(cycle3).to_dense()

    zero = asym_measure(np.zeros((3, 3)), U)
    assert zero.value == 0.0 and zero.kernel_ok
    assert zero.kernel_dim == 1

    assert asym_measure(0.1 * U, U).value == pytest.approx(0.1, rel=1e-10)

    skew = 0.5 * (CYCLE3_DENSE.T - CYCLE3_DENSE)
    assert asym_measure(skew, U).value == pytest.approx(1.0 / math.tan(math.pi / 3), rel=1e-10)


def test_asym_measure_flags_kernel_leak(cycle3):
    U = undirectify(cycle3).to_dense()
    report = asym_measure(np.eye(3), U)
    assert not report.kernel_ok


def test_asym_measure_rejects_indefinite():
    with pytest.raises(NotPSD):
        asym_measure(np.eye(2), np.diag([-1.0, 1.0]))


def test_lambda2_and_u_norm(cycle3):
    assert lambda2(np.array([[1.0, -1.0], [-1.0, 1.0]])) == pytest.approx(2.0)
    U = undirectify_dense(CYCLE3_DENSE)
    assert lambda2(U) == pytest.approx(1.5)
    assert u_norm(U, np.ones(3)) == pytest.approx(0.0, abs=1e-12)


def test_loewner_gap_orders_identity_multiples():
    assert loewner_gap(np.eye(3), 2 * np.eye(3)) == pytest.approx(0.5)
    assert loewner_gap(2 * np.eye(3), np.eye(3)) == pytest.approx(-0.5)
    assert min_eig(np.diag([3.0, -1.0])) == pytest.approx(-1.0)


def test_loewner_gap_on_ones_complement(cycle3):
    U = undirectify(cycle3).to_dense()
    # U and 1.5 (I - 11^T/3) agree on the complement of 1
    assert loewner_gap(U, 1.5 * ones_projector(3), on_ones_complement=True) == pytest.approx(0.0, abs=1e-12)
