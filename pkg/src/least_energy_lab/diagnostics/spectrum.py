"""
Linearized operator -Δ + λ - p·u^{p-1} at a discrete solution: Morse index,
nondegeneracy, and the weak residual of the equation satisfied by
h = (x - x_p)·∇u + 2u/(p-1).
"""
import logging
from typing import Optional, Tuple

import numpy as np

from ..linalg.operators import SparseOperator, assemble_stiffness
from ..linalg.solvers import inertia, smallest_eigenpairs
from ..shared_libraries import constants
from ..shared_libraries.models import SpectrumReport
from ..solver.energy import EnergyFunctional, positive_power
from ..solver.field import nodal_gradients
from ..solver.minimize import SolveReport

logger = logging.getLogger(__name__)

GAP_REFERENCE_INDEX = 10


def linearization(report: SolveReport) -> Tuple[SparseOperator, SparseOperator, EnergyFunctional]:
    """(K + diag(m·(λ - p·u^{p-1})), diag(m)) on interior vertices."""
    functional = EnergyFunctional(report.mesh, report.lam)
    u = functional.interior_of(report.solution)
    power = positive_power(u, report.p - 1.0, report.p)
    operator = functional.operator.add_diagonal(-report.p * functional.weights * power)
    return operator, SparseOperator.diagonal_matrix(functional.weights), functional


def linearized_spectrum(
    report: SolveReport,
    k: Optional[int] = None,
    gap: Optional[float] = None,
) -> SpectrumReport:
    """
    The k smallest eigenvalues of the mass-weighted linearization.

    The negative count comes from the inertia of the operator, not from the
    returned eigenvalues. Without an explicit gap the threshold is
    LEL_NONDEGENERACY_GAP_FACTOR times the tenth smallest |μ|.
    """
    k = constants.DEFAULT_EIGENPAIRS if k is None else k
    operator, mass, _ = linearization(report)
    wanted = min(max(k, GAP_REFERENCE_INDEX), operator.dimension - 1)
    pairs = smallest_eigenpairs(operator, mass, wanted)
    magnitudes = sorted(abs(pair.value) for pair in pairs)
    if gap is None:
        reference = magnitudes[min(GAP_REFERENCE_INDEX, len(magnitudes)) - 1]
        gap = constants.NONDEGENERACY_GAP_FACTOR * reference
    pairs = pairs[:k]
    negatives = inertia(operator)
    first = pairs[0].vector
    positive = bool(np.all(first >= -1e-10 * np.max(np.abs(first))))
    logger.info(
        f"spectrum p={report.p:g} lambda={report.lam:g}: {negatives} negative, "
        f"smallest {pairs[0].value:.6g}"
    )
    return SpectrumReport.from_eigenvalues(
        [pair.value for pair in pairs],
        gap,
        negative_count=negatives,
        first_eigenvector_positive=positive,
        eigenvectors=np.column_stack([pair.vector for pair in pairs]),
    )


def h_equation_residual(report: SolveReport) -> float:
    """
    Relative weak residual of -Δh - p·u^{p-1}h + λh + 2λu = 0 on interior
    vertices, with h built from the recovered nodal gradient. Carries an
    O(h) consistency error from the gradient recovery.
    """
    mesh = report.mesh
    u = report.solution.values
    rel = mesh.vertices - np.asarray(report.max_point)
    gradient = nodal_gradients(mesh, u)
    h = np.sum(rel * gradient, axis=1) + 2.0 * u / (report.p - 1.0)

    interior = mesh.interior_indices
    functional = EnergyFunctional(mesh, report.lam)
    m = functional.weights
    hi = h[interior]
    ui = u[interior]
    diffusion = assemble_stiffness(mesh).matrix[interior] @ h
    reaction = report.p * m * positive_power(ui, report.p - 1.0, report.p) * hi
    shift = report.lam * m * hi
    source = 2.0 * report.lam * m * ui
    residual = diffusion - reaction + shift + source
    scale = sum(np.linalg.norm(part) for part in (diffusion, reaction, shift, source))
    return float(np.linalg.norm(residual) / scale)
