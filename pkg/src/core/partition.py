"""Vertex partitions into eliminated (F) and kept (C) sets."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidPartition
from .sparse import IndexArray


@dataclass(frozen=True, eq=False)
class Partition:
    """Sorted disjoint index sets F and C covering [0, n)."""

    f: IndexArray
    c: IndexArray
    n: int
    is_f: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        f = np.asarray(self.f, dtype=np.int64)
        c = np.asarray(self.c, dtype=np.int64)
        if f.size + c.size != self.n:
            raise InvalidPartition(f"|F| + |C| = {f.size + c.size} != n = {self.n}")
        mask = np.zeros(self.n, dtype=bool)
        if f.size:
            if f.min() < 0 or f.max() >= self.n:
                raise InvalidPartition(f"F index outside [0, {self.n})")
            mask[f] = True
        if c.size and (c.min() < 0 or c.max() >= self.n):
            raise InvalidPartition(f"C index outside [0, {self.n})")
        if np.count_nonzero(mask) != f.size or (c.size and mask[c].any()):
            raise InvalidPartition("F and C must be disjoint and duplicate-free")
        object.__setattr__(self, "f", np.sort(f))
        object.__setattr__(self, "c", np.sort(c))
        object.__setattr__(self, "is_f", mask)

    @classmethod
    def from_f(cls, f: Sequence[int] | IndexArray, n: int) -> Partition:
        f_arr = np.unique(np.asarray(f, dtype=np.int64))
        if len(f_arr) != len(f):
            raise InvalidPartition("F contains duplicate indices")
        mask = np.zeros(n, dtype=bool)
        if f_arr.size and (f_arr.min() < 0 or f_arr.max() >= n):
            raise InvalidPartition(f"F index outside [0, {n})")
        mask[f_arr] = True
        return cls(f=f_arr, c=np.flatnonzero(~mask), n=n)

    @classmethod
    def leading_c(cls, n_c: int, n: int) -> Partition:
        """C = first n_c indices, F = the rest (the augmented-layout convention)."""
        return cls(f=np.arange(n_c, n), c=np.arange(n_c), n=n)

    @property
    def n_f(self) -> int:
        return int(self.f.size)

    @property
    def n_c(self) -> int:
        return int(self.c.size)

    @property
    def cf_order(self) -> IndexArray:
        """C indices followed by F indices."""
        return np.concatenate([self.c, self.f])
