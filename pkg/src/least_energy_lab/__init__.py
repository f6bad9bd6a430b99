"""
Least Energy Lab

Numerical laboratory for least-energy solutions of -Δu + λu = u^p with
Dirichlet data on planar convex domains, and for their concentration as
p → ∞:

- mesh: convex domains, P1 triangulations, graded refinement
- linalg: sparse assembly, CG, factorizations, eigenpairs and inertia
- solver: minimization of the quotient J_λ and continuation in p
- diagnostics: rescaled profiles, star-shapedness, spectra, bounds
- limit_theory: Liouville bubble, kernel modes, Moser bounds, Robin function
- radial_oracle: shooting on the disk as ground truth
- cli: experiment configs, the claims matrix and run artifacts
"""

__version__ = "0.1.0"

from .mesh import DomainSpec, Mesh, build_mesh
from .shared_libraries.models import ProblemParams
from .solver import SolveReport, continue_in_p, minimize

__all__ = [
    "DomainSpec",
    "Mesh",
    "ProblemParams",
    "SolveReport",
    "build_mesh",
    "continue_in_p",
    "minimize",
]
