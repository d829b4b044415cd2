"""RCDD subset selection and sparsified Schur complements."""

from .patch import PatchMatrix, patch_bound, patch_matrix
from .rcdd import find_rcdd, rcdd_partition, rcdd_target_size
from .schur import (
    PbeState,
    RoundRecord,
    SchurResult,
    SchurTrace,
    schur_rounds,
    sparse_schur,
    sparse_schur_traced,
    truncation_patch,
)

__all__ = [
    "PatchMatrix",
    "PbeState",
    "RoundRecord",
    "SchurResult",
    "SchurTrace",
    "find_rcdd",
    "patch_bound",
    "patch_matrix",
    "rcdd_partition",
    "rcdd_target_size",
    "schur_rounds",
    "sparse_schur",
    "sparse_schur_traced",
    "truncation_patch",
]
