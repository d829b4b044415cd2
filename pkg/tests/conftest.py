"""Shared fixtures for the test suite."""

import sys
from pathlib import Path

import numpy as np
import pytest
from rich.console import Console

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.benchmarks import random_eulerian
from src.config import Tolerances
from src.core import DirectedLaplacian, build_laplacian

CYCLE3_DENSE = np.array([[1.0, 0.0, -1.0], [-1.0, 1.0, 0.0], [0.0, -1.0, 1.0]])


@pytest.fixture
def cycle3() -> DirectedLaplacian:
    """Unit 3-cycle 0 -> 1 -> 2 -> 0."""
    return build_laplacian([(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)], 3)


@pytest.fixture
def tolerances() -> Tolerances:
    return Tolerances()


@pytest.fixture
def quiet() -> Console:
    return Console(quiet=True)


@pytest.fixture
def eulerian_factory():
    """Seeded random Eulerian Laplacians: factory(n, m=None, seed=0)."""

    def make(n: int, m: int | None = None, seed: int = 0) -> DirectedLaplacian:
        return random_eulerian(n, m, seed)

    return make
