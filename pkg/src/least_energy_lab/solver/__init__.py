"""Least-energy solutions: the quotient J_λ, its minimization and continuation in p."""
from .energy import EnergyFunctional, epsilon_of, quotient
from .field import (
    Field,
    first_dirichlet_eigenvalue,
    first_eigenfunction,
    gaussian_bump,
    transfer_field,
)
from .minimize import (
    SolveReport,
    continue_in_p,
    default_schedule,
    minimize,
    probe_branch_uniqueness,
)
from .snapshot import read_snapshot, write_snapshot

__all__ = [
    "EnergyFunctional",
    "Field",
    "SolveReport",
    "continue_in_p",
    "default_schedule",
    "epsilon_of",
    "first_dirichlet_eigenvalue",
    "first_eigenfunction",
    "gaussian_bump",
    "minimize",
    "probe_branch_uniqueness",
    "quotient",
    "read_snapshot",
    "transfer_field",
    "write_snapshot",
]
