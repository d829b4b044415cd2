"""Preconditioned Richardson solver driven by Schur complement chains."""

from .analysis import (
    assemble_lap,
    bhat_contraction,
    error_bound_matrix,
    inner_iteration_radius,
    inner_radius_bound,
    inner_truncation_bound,
    operator_norm,
    preconditioner_matrix,
    truncated_inverse,
    u_contraction,
)
from .preconditioner import Preconditioner, inner_sweeps, prec_apply
from .richardson import as_operator, diagonal_operator, pri
from .solve import SolveConfig, SolveReport, Solver, solve, u_seminorm

__all__ = [
    "Preconditioner",
    "SolveConfig",
    "SolveReport",
    "Solver",
    "as_operator",
    "assemble_lap",
    "bhat_contraction",
    "diagonal_operator",
    "error_bound_matrix",
    "inner_iteration_radius",
    "inner_radius_bound",
    "inner_sweeps",
    "inner_truncation_bound",
    "operator_norm",
    "prec_apply",
    "preconditioner_matrix",
    "pri",
    "solve",
    "truncated_inverse",
    "u_contraction",
    "u_seminorm",
]
