"""Sparsifier configuration and the backend interface."""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Literal

import numpy as np
from pydantic import BaseModel, Field, field_validator

from ..config import DEFAULT_BACKEND, DEFAULT_OVERSAMPLE

BackendName = Literal["passthrough", "sample_patch"]


class SparsifierConfig(BaseModel):
    """Knobs shared by the product and Eulerian sparsifiers."""

    backend: BackendName = DEFAULT_BACKEND  # type: ignore[assignment]
    delta: float = 0.1
    oversample: float = Field(default=DEFAULT_OVERSAMPLE, ge=1.0)  # c_s
    failure_prob: float | None = None  # nominal; only tightens the log factor
    exact_products: bool = False  # unlimited product budget

    @field_validator("delta")
    @classmethod
    def _delta_in_unit_interval(cls, v: float) -> float:
        if not 0.0 < v < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {v}")
        return v

    @field_validator("failure_prob")
    @classmethod
    def _failure_prob_in_unit_interval(cls, v: float | None) -> float | None:
        if v is not None and not 0.0 < v < 1.0:
            raise ValueError(f"failure_prob must lie in (0, 1), got {v}")
        return v

    def log_factor(self, n: int) -> float:
        """log(n / p) with p defaulting to 1."""
        p = self.failure_prob or 1.0
        return float(np.log(max(n, 2) / p))


@dataclass
class WeightBlock:
    """Nonnegative edge weights W[row, col] = w(col -> row) of one sparsified block."""

    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray
    n: int

    @property
    def nnz(self) -> int:
        return int(self.vals.size)


class SparsifierBackend(ABC):
    """Abstract base class for degree-preserving edge sparsifiers."""

    @property
    @abstractmethod
    def name(self) -> str:
        """Backend name as accepted by SparsifierConfig.backend."""
        ...

    @abstractmethod
    def sparsify_block(
        self,
        block: WeightBlock,
        delta: float,
        config: SparsifierConfig,
        generator: np.random.Generator,
    ) -> tuple[WeightBlock, bool]:
        """
        Sparsify one weight block.

        Returns:
            The new block, whose in- and out-weight at every vertex matches
            the input, and whether the backend fell back to the input block.
        """
        ...
