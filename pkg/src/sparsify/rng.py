"""Deterministic random streams keyed by (seed, call site)."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np


def _key(label: int | str) -> int:
    if isinstance(label, int):
        return label
    digest = hashlib.blake2b(label.encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


@dataclass(frozen=True)
class RngStream:
    """
    Named random stream.

    Every randomised routine takes an RngStream and derives children for its
    own call sites, so identical seeds reproduce identical outputs no matter
    how many other streams were consumed in between.
    """

    seed: int
    path: tuple[int, ...] = ()

    def child(self, *labels: int | str) -> RngStream:
        return RngStream(self.seed, self.path + tuple(_key(label) for label in labels))

    def generator(self) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence(entropy=self.seed, spawn_key=self.path))
