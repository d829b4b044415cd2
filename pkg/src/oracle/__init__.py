"""Dense reference computations used for verification."""

from .dense import (
    AsymMeasureReport,
    DenseMatrix,
    as_dense,
    asym_measure,
    exact_pbe,
    exact_schur,
    lambda2,
    loewner_gap,
    min_eig,
    ones_projector,
    pinv,
    scaled_laplacian_norm,
    symmetrize,
    u_norm,
    undirectify_dense,
)

__all__ = [
    "AsymMeasureReport",
    "DenseMatrix",
    "as_dense",
    "asym_measure",
    "exact_pbe",
    "exact_schur",
    "lambda2",
    "loewner_gap",
    "min_eig",
    "ones_projector",
    "pinv",
    "scaled_laplacian_norm",
    "symmetrize",
    "u_norm",
    "undirectify_dense",
]
