"""Exception hierarchy for the solver library."""

from typing import Any


class EulerSolveError(Exception):
    """Base class for every error raised by this package."""


# Input validation


class InvalidInput(EulerSolveError, ValueError):
    """An argument violates a documented precondition."""


class InvalidEdge(InvalidInput):
    """Edge list entry with a self-loop, an out-of-range endpoint or a bad weight."""


class InvalidPartition(InvalidInput):
    """F and C do not partition the index set."""


class NotLaplacian(InvalidInput):
    """Matrix has positive off-diagonals or nonzero column sums."""


class NotEulerian(InvalidInput):
    """Laplacian row sums are not zero within tolerance."""


class NotPSD(InvalidInput):
    """Matrix expected to be symmetric positive semidefinite is not."""


class PreconditionViolated(InvalidInput):
    """A routine was called outside the regime its guarantees cover."""


class SizeError(InvalidInput):
    """Requested dimensions are inconsistent."""


class TooLarge(SizeError):
    """Input exceeds a dense or augmented construction cap."""


class UsageError(InvalidInput):
    """Bad command-line or generator parameters."""


# Numerics


class NumericError(EulerSolveError, ArithmeticError):
    """Non-finite values or an ill-posed dense computation."""


class SingularBlock(NumericError):
    """Eliminated block is singular."""


class NumericDrift(NumericError):
    """An intermediate matrix lost the Eulerian property beyond tolerance."""


class Diverged(NumericError):
    """Iteration produced non-finite values."""

    def __init__(self, message: str, iteration: int):
        super().__init__(message)
        self.iteration = iteration


# Randomised construction and solving


class RetryExhausted(EulerSolveError, RuntimeError):
    """A randomised routine failed every allowed attempt."""


class ChainBuildError(EulerSolveError, RuntimeError):
    """Chain construction failed at a specific level."""

    def __init__(self, message: str, level: int):
        super().__init__(f"level {level}: {message}")
        self.level = level


class ChainError(EulerSolveError):
    """Chain object is malformed or missing cached data."""


class Stagnated(EulerSolveError):
    """Outer iteration stopped making progress."""

    def __init__(self, message: str, report: Any = None):
        super().__init__(message)
        self.report = report
