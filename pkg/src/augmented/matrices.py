"""Augmented block-elimination matrices, the psi bijections and repetition matrices."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..config import AUGMENTED_CAP, AUGMENTED_MAX_K
from ..core import Partition
from ..errors import SizeError, TooLarge
from ..oracle import DenseMatrix, as_dense, exact_pbe
from ..oracle.dense import DenseLike


@dataclass(frozen=True)
class PsiBijection:
    """Permutation of the block labels 1..2^level, stored 1-based."""

    level: int
    table: tuple[int, ...]

    def __call__(self, a: int) -> int:
        if not 1 <= a <= len(self.table):
            raise IndexError(f"block label {a} outside 1..{len(self.table)}")
        return self.table[a - 1]

    def as_dict(self) -> dict[int, int]:
        return {a + 1: b for a, b in enumerate(self.table)}


@lru_cache(maxsize=None)
def _psi_table(level: int) -> tuple[int, ...]:
    if level == 0:
        return (1,)
    half = 2 ** (level - 1)
    inner = _psi_table(level - 1)
    first = tuple(a + half for a in range(1, half + 1))
    second = tuple(inner[a - 1] for a in range(1, half + 1))
    return first + second


def psi(level: int) -> PsiBijection:
    """
    Block pairing used by the augmented matrices.

    psi^(0)(1) = 1; for level i, labels a <= 2^(i-1) map to a + 2^(i-1) and
    the upper half recurses into psi^(i-1)(a - 2^(i-1)).
    """
    if level < 0:
        raise ValueError(f"psi level must be nonnegative, got {level}")
    return PsiBijection(level=level, table=_psi_table(level))


@dataclass
class AugmentedMatrix:
    """Dense augmented matrix M^(i,k) in the layout C, F_1, ..., F_{2^(k-i)}."""

    i: int
    k: int
    n_c: int
    n_f: int
    mat: DenseMatrix
    block_layout: dict[tuple[str, str], str] = field(default_factory=dict)

    @property
    def n_blocks(self) -> int:
        return 2 ** (self.k - self.i)

    def block_slice(self, label: str) -> slice:
        if label == "C":
            return slice(0, self.n_c)
        if not label.startswith("F"):
            raise KeyError(label)
        a = int(label[1:])
        if not 1 <= a <= self.n_blocks:
            raise KeyError(label)
        start = self.n_c + (a - 1) * self.n_f
        return slice(start, start + self.n_f)

    def block(self, row_label: str, col_label: str) -> DenseMatrix:
        return self.mat[self.block_slice(row_label), self.block_slice(col_label)]


def build_augmented(L: DenseLike, part: Partition, i: int, k: int) -> AugmentedMatrix:
    """
    Assemble M^(i,k) from the exact block elimination L^(i), A^(i).

    The C block carries 2^(k-i) L^(i)_CC. Every copy F_a carries D_FF on its
    diagonal block, couples to C through -A_FC and -A_CF, and couples to the
    copy F_{psi(a)} through -A^(i)_FF.

    Raises:
        TooLarge: If k exceeds the augmented cap or the matrix would exceed
            AUGMENTED_CAP rows.
    """
    if not 0 <= i <= k:
        raise ValueError(f"need 0 <= i <= k, got i={i}, k={k}")
    if k > AUGMENTED_MAX_K:
        raise TooLarge(f"augmented matrices capped at k = {AUGMENTED_MAX_K}, got {k}")
    n_blocks = 2 ** (k - i)
    size = part.n_c + n_blocks * part.n_f
    if size > AUGMENTED_CAP:
        raise TooLarge(f"augmented matrix of size {size} exceeds cap {AUGMENTED_CAP}")

    lap = as_dense(L)
    li, ai = exact_pbe(lap, part, i)
    f, c = part.f, part.c
    d_ff = np.diag(np.diag(lap)[f])
    a_ff = ai[np.ix_(f, f)]
    a_fc = ai[np.ix_(f, c)]
    a_cf = ai[np.ix_(c, f)]

    aug = AugmentedMatrix(i=i, k=k, n_c=part.n_c, n_f=part.n_f, mat=np.zeros((size, size)))
    pairing = psi(k - i)
    aug.mat[aug.block_slice("C"), aug.block_slice("C")] = n_blocks * li[np.ix_(c, c)]
    aug.block_layout[("C", "C")] = f"{n_blocks} L_CC"
    for a in range(1, n_blocks + 1):
        fa = f"F{a}"
        partner = f"F{pairing(a)}"
        aug.mat[aug.block_slice(fa), aug.block_slice(fa)] += d_ff
        aug.mat[aug.block_slice(fa), aug.block_slice(partner)] -= a_ff
        aug.mat[aug.block_slice(fa), aug.block_slice("C")] = -a_fc
        aug.mat[aug.block_slice("C"), aug.block_slice(fa)] = -a_cf
        aug.block_layout[(fa, fa)] = "D_FF"
        if partner == fa:
            aug.block_layout[(fa, fa)] = "D_FF - A_FF"
        else:
            aug.block_layout[(fa, partner)] = "-A_FF"
        aug.block_layout[(fa, "C")] = "-A_FC"
        aug.block_layout[("C", fa)] = "-A_CF"
    return aug


def eliminate_upper_half(aug: AugmentedMatrix) -> DenseMatrix:
    """Schur complement of M^(i,k) onto C, F_1, ..., F_{2^(k-i-1)}."""
    if aug.i >= aug.k:
        raise ValueError("nothing left to eliminate at i == k")
    keep_to = aug.n_c + (aug.n_blocks // 2) * aug.n_f
    kept = np.arange(keep_to)
    dropped = np.arange(keep_to, aug.mat.shape[0])
    m = aug.mat
    m_dd = m[np.ix_(dropped, dropped)]
    return m[np.ix_(kept, kept)] - m[np.ix_(kept, dropped)] @ np.linalg.solve(
        m_dd, m[np.ix_(dropped, kept)]
    )


def cf_layout(M: DenseMatrix, part: Partition) -> DenseMatrix:
    """Reorder an n x n matrix into (C, F) order."""
    order = part.cf_order
    return np.asarray(M)[np.ix_(order, order)]


def lifted_vector(x: np.ndarray, part: Partition, k: int) -> np.ndarray:
    """(x_C, x_F, ..., x_F) with 2^k copies of x_F, matching M^(0,k)."""
    x = np.asarray(x, dtype=np.float64)
    return np.concatenate([x[part.c]] + [x[part.f]] * (2**k))


def repetition(k: int, part: Partition, A: DenseLike) -> DenseMatrix:
    """
    Repetition matrix of A in the layout C, F_1, ..., F_k.

    The C block is k A_CC; each copy F_a carries A_FF on its diagonal block
    and A_FC, A_CF on its couplings to C.
    """
    if k < 1:
        raise ValueError(f"repetition count must be positive, got {k}")
    arr = as_dense(A)
    f, c = part.f, part.c
    n_c, n_f = part.n_c, part.n_f
    size = n_c + k * n_f
    out = np.zeros((size, size))
    out[:n_c, :n_c] = k * arr[np.ix_(c, c)]
    for a in range(k):
        block = slice(n_c + a * n_f, n_c + (a + 1) * n_f)
        out[block, block] = arr[np.ix_(f, f)]
        out[block, :n_c] = arr[np.ix_(f, c)]
        out[:n_c, block] = arr[np.ix_(c, f)]
    return out


def repetition_padded(k: int, part: Partition, A: DenseLike, size: int) -> DenseMatrix:
    """
    Repetition matrix padded with zero rows and columns up to `size`.

    Raises:
        SizeError: If size < k |F| + |C|.
    """
    needed = k * part.n_f + part.n_c
    if size < needed:
        raise SizeError(f"padded size {size} smaller than k|F| + |C| = {needed}")
    rep = repetition(k, part, A)
    out = np.zeros((size, size))
    out[:needed, :needed] = rep
    return out


def repetition_partition(part: Partition, k: int) -> Partition:
    """Partition of a repetition matrix: C leads, the k copies of F follow."""
    return Partition.leading_c(part.n_c, part.n_c + k * part.n_f)
