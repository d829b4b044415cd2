"""Product and Eulerian sparsifiers."""

from .base import SparsifierBackend, SparsifierConfig, WeightBlock
from .eulerian import (
    PassthroughBackend,
    SamplePatchBackend,
    degree_patch,
    get_backend,
    output_budget,
    sample_edge_weights,
    se,
    spar_e,
)
from .product import product_samples, sp_split, spar_p
from .rng import RngStream

__all__ = [
    "PassthroughBackend",
    "RngStream",
    "SamplePatchBackend",
    "SparsifierBackend",
    "SparsifierConfig",
    "WeightBlock",
    "degree_patch",
    "get_backend",
    "output_budget",
    "product_samples",
    "sample_edge_weights",
    "se",
    "sp_split",
    "spar_e",
    "spar_p",
]
