"""Augmented matrices for exact partial block elimination."""

from .matrices import (
    AugmentedMatrix,
    PsiBijection,
    build_augmented,
    cf_layout,
    eliminate_upper_half,
    lifted_vector,
    psi,
    repetition,
    repetition_padded,
    repetition_partition,
)

__all__ = [
    "AugmentedMatrix",
    "PsiBijection",
    "build_augmented",
    "cf_layout",
    "eliminate_upper_half",
    "lifted_vector",
    "psi",
    "repetition",
    "repetition_padded",
    "repetition_partition",
]
