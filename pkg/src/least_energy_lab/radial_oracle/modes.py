"""
Angular modes of the linearized operator at a radial solution.

Each mode k is discretized by finite volumes in τ = log r, where the
operator multiplied by r² reads

    -ψ_ττ + (k² + r²(λ - p·u^{p-1}))·ψ = μ·r²·ψ.

The stiffness part stays O(1/Δτ) from the concentration core out to the
disk boundary, so the eigenvalues come out directly in physical units.
The grid starts at a thousandth of the concentration scale with a zero
flux face (ψ regular at the origin) and ends with a Dirichlet face at
the disk radius.
"""
import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from ..limit_theory.bubble import kernel_functions
from ..linalg import SparseOperator, inertia, smallest_eigenpairs
from ..shared_libraries import constants
from ..shared_libraries.errors import GridTooCoarseError
from ..shared_libraries.models import SpectrumReport
from .shooting import RadialSolution

logger = logging.getLogger(__name__)

LOG_STEP = 0.01
MAX_LOG_STEP = 0.05
# Rescaled radius |X| of the innermost face
INNER_RESCALED_RADIUS = 1e-3
KERNEL_WINDOW = 8.0


def mode_grid(sol: RadialSolution, step: float = LOG_STEP) -> Tuple[np.ndarray, np.ndarray, float]:
    """Cell centers r_i, weights ∫r²dτ per cell, and the actual τ step."""
    if step > MAX_LOG_STEP:
        raise GridTooCoarseError(f"log-radius step {step:g} exceeds {MAX_LOG_STEP:g}")
    low = math.log(INNER_RESCALED_RADIUS * sol.epsilon)
    high = math.log(sol.disk_radius)
    cells = int(math.ceil((high - low) / step))
    faces = np.linspace(low, high, cells + 1)
    h = float(faces[1] - faces[0])
    centers = np.exp(0.5 * (faces[:-1] + faces[1:]))
    weights = 0.5 * (np.exp(2.0 * faces[1:]) - np.exp(2.0 * faces[:-1]))
    return centers, weights, h


def _mode_operators(sol: RadialSolution, k: int, step: float):
    r, weights, h = mode_grid(sol, step)
    n = r.size
    s = np.minimum(r * sol.scale, sol.profile.first_zero)
    w = sol.profile.evaluate(s)[0]
    with np.errstate(divide="ignore"):
        power = np.where(w > 0, np.exp((sol.p - 1.0) * np.log(np.maximum(w, 1e-300))), 0.0)
    potential = k * k + r * r * sol.lam - sol.p * s * s * power

    main = np.full(n, 2.0 / h)
    main[0] = 1.0 / h
    main[-1] = 3.0 / h
    off = np.full(n - 1, -1.0 / h)
    stiffness = sp.diags([off, main + h * potential, off], [-1, 0, 1], format="csr")
    A = SparseOperator(stiffness)
    B = SparseOperator.diagonal_matrix(weights)
    lower_bound = float(np.min(h * potential / weights))
    return A, B, lower_bound


def radial_linearized_modes(
    sol: RadialSolution,
    k_max: int = 4,
    n_eigs: Optional[int] = None,
    step: float = LOG_STEP,
) -> List[SpectrumReport]:
    """
    Smallest eigenvalues of L_k = -d²/dr² - (1/r)d/dr + k²/r² + λ - p·u^{p-1}
    for k = 0..k_max, one SpectrumReport per mode.

    Mode 0 should carry the single negative eigenvalue (Morse index 1);
    the nondegeneracy gap is NONDEGENERACY_GAP_FACTOR times the tenth
    smallest |μ| over all modes.

    Raises:
        ValueError: k_max < 2 or n_eigs < 1
        GridTooCoarseError: log-radius step above 0.05
        EigenSolverError: propagated from the eigensolver
    """
    n_eigs = constants.DEFAULT_EIGENPAIRS if n_eigs is None else n_eigs
    if k_max < 2:
        raise ValueError(f"k_max must be >= 2, got {k_max}")
    if n_eigs < 1:
        raise ValueError(f"n_eigs must be >= 1, got {n_eigs}")

    found = []
    for k in range(k_max + 1):
        A, B, lower_bound = _mode_operators(sol, k, step)
        pairs = smallest_eigenpairs(A, B, n_eigs, lower_bound=lower_bound)
        found.append((k, inertia(A), pairs))

    magnitudes = sorted(abs(pair.value) for _, _, pairs in found for pair in pairs)
    gap = constants.NONDEGENERACY_GAP_FACTOR * magnitudes[min(9, len(magnitudes) - 1)]

    reports = []
    for k, negatives, pairs in found:
        vectors = np.column_stack([pair.vector for pair in pairs])
        first = vectors[:, 0]
        positive = bool(np.all(first >= -1e-10 * np.max(np.abs(first))))
        reports.append(SpectrumReport.from_eigenvalues(
            [pair.value for pair in pairs],
            gap,
            negative_count=negatives,
            expected_negative=1 if k == 0 else 0,
            mode=k,
            first_eigenvector_positive=positive,
            eigenvectors=vectors,
        ))
        logger.debug(f"mode k={k}: {negatives} negative, smallest {pairs[0].value:.6g}")
    return reports


def kernel_overlap(
    sol: RadialSolution,
    report: SpectrumReport,
    window: float = KERNEL_WINDOW,
    step: float = LOG_STEP,
) -> float:
    """
    Cosine between the first k=1 eigenvector and ζ₁(r/ε) on r ≤ window·ε,
    in the r dr inner product.
    """
    if report.mode != 1:
        raise ValueError(f"kernel overlap needs the k=1 mode report, got mode {report.mode}")
    r, weights, _ = mode_grid(sol, step)
    rescaled = r / sol.epsilon
    inside = rescaled <= window
    psi = report.eigenvectors[inside, 0]
    zeta = kernel_functions(rescaled[inside])[1]
    wts = weights[inside]
    numerator = abs(float(np.sum(wts * psi * zeta)))
    return numerator / math.sqrt(float(np.sum(wts * psi ** 2)) * float(np.sum(wts * zeta ** 2)))


def morse_index(reports: Sequence[SpectrumReport]) -> int:
    """Negative eigenvalues on the disk: k ≥ 1 modes carry both cos kθ and sin kθ."""
    return sum(report.negative_count * (1 if report.mode == 0 else 2) for report in reports)
