"""
Linear solves, inertia counts and smallest generalized eigenpairs.

smallest_eigenpairs splits the spectrum at zero: the negative eigenvalues
(counted exactly by Sylvester inertia) come from a shift placed below a
spectral lower bound, the rest from a shift at zero.
"""
import logging
import math
from typing import List, Optional

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator, cg, eigsh, splu

from ..shared_libraries import constants
from ..shared_libraries.errors import ConvergenceError, EigenSolverError
from ..shared_libraries.models import EigenPair
from .operators import SparseOperator

logger = logging.getLogger(__name__)

# Problems up to this size are solved densely
DENSE_EIGEN_LIMIT = 600
DENSE_INERTIA_LIMIT = 3000


def solve_spd(A: SparseOperator, b: np.ndarray, tol: Optional[float] = None) -> np.ndarray:
    """
    Jacobi-preconditioned conjugate gradients.

    Args:
        A: Symmetric positive definite operator
        b: Right-hand side
        tol: Relative residual target ‖Ax-b‖/‖b‖ (defaults to LEL_SOLVER_TOL)

    Returns:
        Solution vector

    Raises:
        ConvergenceError: iteration cap 50·√n reached, carrying the last residual
    """
    tol = constants.SOLVER_TOL if tol is None else tol
    b = np.asarray(b, dtype=float)
    b_norm = np.linalg.norm(b)
    if b_norm == 0.0:
        return np.zeros_like(b)
    n = A.dimension
    maxiter = max(10, math.ceil(constants.CG_ITERATION_FACTOR * math.sqrt(n)))
    diag = A.diagonal()
    if np.any(diag <= 0):
        raise ConvergenceError("operator has a non-positive diagonal entry", last_residual=math.inf)
    preconditioner = LinearOperator((n, n), matvec=lambda x: x / diag, dtype=float)
    x, info = cg(A.matrix, b, rtol=0.5 * tol, atol=0.0, maxiter=maxiter, M=preconditioner)
    residual = float(np.linalg.norm(A.matrix @ x - b) / b_norm)
    if info != 0 or residual > tol:
        raise ConvergenceError(
            f"conjugate gradients stopped at relative residual {residual:.3e} "
            f"after {maxiter if info > 0 else 'fewer'} iterations (target {tol:.1e})",
            last_residual=residual,
        )
    return x


def factorize(A: SparseOperator):
    """Sparse LU factor of a symmetric operator (SuperLU, symmetric ordering)."""
    return splu(
        sp.csc_matrix(A.matrix),
        permc_spec="MMD_AT_PLUS_A",
        diag_pivot_thresh=0.0,
        options={"SymmetricMode": True},
    )


def inertia(A: SparseOperator) -> int:
    """Number of negative eigenvalues of a symmetric nonsingular operator."""
    n = A.dimension
    try:
        lu = factorize(A)
        if np.array_equal(lu.perm_r, lu.perm_c):
            return int(np.sum(lu.U.diagonal() < 0))
        logger.warning("LU factorization pivoted off the diagonal; counting negatives densely")
    except RuntimeError as e:
        logger.warning(f"Symmetric factorization failed ({e}); counting negatives densely")
    if n > DENSE_INERTIA_LIMIT:
        raise EigenSolverError(f"cannot count negative eigenvalues of a {n}x{n} operator")
    return int(np.sum(np.linalg.eigvalsh(A.matrix.toarray()) < 0))


def gershgorin_lower_bound(A: SparseOperator, B: SparseOperator) -> float:
    """Lower bound on the spectrum of A v = μ B v."""
    offdiag = abs(A.matrix - sp.diags(A.diagonal())).sum(axis=1).A1
    a_diag = A.diagonal()
    if B.is_diagonal:
        b_diag = B.diagonal()
        scale = np.sqrt(b_diag)
        inverse = sp.diags(1.0 / scale)
        scaled_off = abs(inverse @ (A.matrix - sp.diags(a_diag)) @ inverse)
        return float(np.min(a_diag / b_diag - scaled_off.sum(axis=1).A1))
    a_low = float(np.min(a_diag - offdiag))
    if a_low >= 0:
        return 0.0
    b_off = abs(B.matrix - sp.diags(B.diagonal())).sum(axis=1).A1
    b_low = float(np.min(B.diagonal() - b_off))
    if b_low <= 0:
        b_low = float(eigsh(B.matrix, k=1, sigma=0.0, which="LM", return_eigenvectors=False)[0])
    return a_low / b_low


def _finish(
    A: SparseOperator, B: SparseOperator, values: np.ndarray, vectors: np.ndarray
) -> List[EigenPair]:
    scale = A.norm_inf()
    b_scale = B.norm_inf()
    pairs = []
    for value, vector in zip(values, vectors.T):
        norm_b = math.sqrt(float(vector @ (B.matrix @ vector)))
        vector = vector / norm_b
        # Sign convention: largest-magnitude entry positive
        if vector[np.argmax(np.abs(vector))] < 0:
            vector = -vector
        defect = A.matrix @ vector - value * (B.matrix @ vector)
        denominator = (scale + abs(value) * b_scale) * np.linalg.norm(vector)
        residual = float(np.linalg.norm(defect) / denominator)
        pairs.append(EigenPair(value=float(value), vector=vector, residual=residual))
    return pairs


def smallest_eigenpairs(
    A: SparseOperator,
    B: SparseOperator,
    k: int,
    tol: Optional[float] = None,
    lower_bound: Optional[float] = None,
) -> List[EigenPair]:
    """
    The k smallest eigenpairs of A v = μ B v, ascending, with ‖v‖_B = 1.

    Residuals are backward errors ‖Av - μBv‖ / ((‖A‖ + |μ|‖B‖)·‖v‖).

    Args:
        A: Symmetric operator (may be indefinite)
        B: Symmetric positive definite operator
        k: Number of pairs, below the dimension
        tol: Eigensolver tolerance (defaults to LEL_EIGEN_TOL)
        lower_bound: Known lower bound on the spectrum; Gershgorin otherwise

    Raises:
        EigenSolverError: k out of range or the iteration failed
    """
    tol = constants.EIGEN_TOL if tol is None else tol
    n = A.dimension
    if B.dimension != n:
        raise EigenSolverError(f"operator sizes differ: {n} vs {B.dimension}")
    if not 1 <= k < n:
        raise EigenSolverError(f"requested {k} eigenpairs of a {n}-dimensional problem")

    if n <= DENSE_EIGEN_LIMIT:
        values, vectors = scipy.linalg.eigh(
            A.matrix.toarray(), B.matrix.toarray(), subset_by_index=[0, k - 1]
        )
        return _finish(A, B, values, vectors)

    start = np.ones(n) / math.sqrt(n)
    try:
        negatives = inertia(A)
        values, vectors = [], []
        if negatives:
            bound = gershgorin_lower_bound(A, B) if lower_bound is None else lower_bound
            shift = bound - max(1e-3 * abs(bound), 1e-8 * max(1.0, A.norm_inf()))
            count = min(negatives, k)
            low_values, low_vectors = eigsh(
                A.matrix, k=count, M=B.matrix, sigma=shift, which="LM", tol=tol, v0=start
            )
            values.append(low_values)
            vectors.append(low_vectors)
        if negatives < k:
            count = min(k, n - 1)
            try:
                near_values, near_vectors = eigsh(
                    A.matrix, k=count, M=B.matrix, sigma=0.0, which="LM", tol=tol, v0=start
                )
            except RuntimeError:
                # exactly singular at zero
                near_values, near_vectors = eigsh(
                    A.matrix, k=count, M=B.matrix, sigma=-1e-8 * max(1.0, A.norm_inf()),
                    which="LM", tol=tol, v0=start,
                )
            values.append(near_values)
            vectors.append(near_vectors)
    except (RuntimeError, ValueError) as e:
        raise EigenSolverError(f"eigensolver failed: {e}") from e

    all_values = np.concatenate(values)
    all_vectors = np.hstack(vectors)
    order = np.argsort(all_values, kind="stable")
    kept: List[int] = []
    for index in order:
        value = all_values[index]
        if kept and abs(value - all_values[kept[-1]]) <= 1e-9 * max(1.0, abs(value)):
            # same eigenvalue found by both shifts unless the vectors are independent
            previous = all_vectors[:, kept[-1]]
            overlap = abs(previous @ (B.matrix @ all_vectors[:, index]))
            overlap /= math.sqrt(abs(previous @ (B.matrix @ previous)) * abs(
                all_vectors[:, index] @ (B.matrix @ all_vectors[:, index])))
            if overlap > 0.5:
                continue
        kept.append(index)
    kept = kept[:k]
    if len(kept) < k:
        raise EigenSolverError(f"found only {len(kept)} of {k} eigenpairs")
    logger.debug(f"Eigenpairs: {negatives} negative of {n}, smallest {all_values[kept[0]]:.6g}")
    return _finish(A, B, all_values[kept], all_vectors[:, kept])
