"""
Error taxonomy for Least Energy Lab.

Every failure a module can report is a LabError subclass carrying the data
a caller needs to act on it (the offending vertex, the last residual, the
completed prefix of a continuation, ...).
"""
from typing import Any, List, Optional, Sequence


class LabError(Exception):
    """Base class for all errors raised by the lab."""


class DomainError(LabError, ValueError):
    """Invalid domain description."""


class NonConvexDomainError(DomainError):
    """A polygon is not strictly convex or a mesh does not cover a convex region."""

    def __init__(self, message: str, vertex_index: Optional[int] = None, vertex: Any = None):
        super().__init__(message)
        self.vertex_index = vertex_index
        self.vertex = vertex


class MeshSizeError(LabError):
    """Refinement would exceed the configured vertex cap."""

    def __init__(self, message: str, cap: int, estimate: int):
        super().__init__(message)
        self.cap = cap
        self.estimate = estimate


class DegenerateElementError(LabError):
    """A triangle has (numerically) zero area."""

    def __init__(self, message: str, triangle_index: int):
        super().__init__(message)
        self.triangle_index = triangle_index


class ConvergenceError(LabError):
    """An iterative solver failed to reach its tolerance."""

    def __init__(self, message: str, last_residual: float):
        super().__init__(message)
        self.last_residual = last_residual


class EigenSolverError(LabError):
    """Eigenpair computation failed or was asked for too many pairs."""


class StagnationError(ConvergenceError):
    """Quotient minimization stopped decreasing before meeting its tolerance."""

    def __init__(self, message: str, last_residual: float, last_iterate: Any):
        super().__init__(message, last_residual)
        self.last_iterate = last_iterate


class PowerOverflowError(LabError, OverflowError):
    """u^p overflowed; evaluation must run in log-domain mode."""


class ContinuationError(LabError):
    """A continuation stage failed; the completed prefix is attached."""

    def __init__(self, message: str, stage: float, completed: Sequence[Any]):
        super().__init__(message)
        self.stage = stage
        self.completed: List[Any] = list(completed)


class RobinSampleError(LabError, ValueError):
    """A Robin-function sample point lies too close to the boundary."""

    def __init__(self, message: str, distance: float):
        super().__init__(message)
        self.distance = distance


class GridTooCoarseError(LabError, ValueError):
    """A radial grid is too coarse (or too short) for the requested operator."""


class IntegrationError(LabError):
    """An ODE integration broke down."""

    def __init__(self, message: str, radius: float):
        super().__init__(message)
        self.radius = radius


class BracketingError(LabError):
    """No sign change of the shooting mismatch over the amplitude range."""

    def __init__(self, message: str, scan: Sequence[Any]):
        super().__init__(message)
        self.scan = list(scan)


class SnapshotFormatError(LabError, ValueError):
    """A mesh or field text file does not follow the documented format."""


class SummaryError(LabError):
    """A run directory is missing its summary or the summary is corrupted."""
