"""Sparse symmetric operators, P1 assembly and solvers."""
from .operators import SparseOperator, assemble_mass, assemble_stiffness, lumped_weights
from .solvers import factorize, gershgorin_lower_bound, inertia, smallest_eigenpairs, solve_spd

__all__ = [
    "SparseOperator",
    "assemble_mass",
    "assemble_stiffness",
    "factorize",
    "gershgorin_lower_bound",
    "inertia",
    "lumped_weights",
    "smallest_eigenpairs",
    "solve_spd",
]
