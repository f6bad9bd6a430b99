"""
Tests for P1 assembly, linear solves and eigenpairs.

Run with: pytest tests/test_linalg.py
"""
import io
import math

import numpy as np
import pytest
import scipy.sparse as sp

from least_energy_lab.linalg import (
    SparseOperator,
    assemble_mass,
    assemble_stiffness,
    gershgorin_lower_bound,
    inertia,
    lumped_weights,
    smallest_eigenpairs,
    solve_spd,
)
from least_energy_lab.shared_libraries import constants
from least_energy_lab.shared_libraries.errors import ConvergenceError, EigenSolverError


def laplacian_1d(n, shift=0.0):
    """tridiag(-1, 2, -1) - shift·I."""
    main = np.full(n, 2.0 - shift)
    off = np.full(n - 1, -1.0)
    return SparseOperator(sp.diags([off, main, off], [-1, 0, 1], format="csr"))


# ============================================================================
# Operators and assembly
# ============================================================================

def test_operator_normalizes_storage():
    """Duplicates are summed and indices sorted."""
    matrix = sp.csr_matrix(
        (np.array([1.0, 2.0, 3.0]), np.array([1, 0, 1]), np.array([0, 3, 3])), shape=(2, 2)
    )
    op = SparseOperator(matrix)
    assert op.matrix.nnz == 2
    assert np.all(np.diff(op.indices[op.indptr[0]:op.indptr[1]]) > 0)
    assert op.matrix[0, 1] == 4.0


def test_operator_rejects_rectangular():
    with pytest.raises(ValueError, match="square"):
        SparseOperator(sp.csr_matrix(np.ones((2, 3))))


def test_dump_coordinates_sorted():
    op = SparseOperator.diagonal_matrix([1.5, 2.0])
    buffer = io.StringIO()
    op.dump_coordinates(buffer)
    assert buffer.getvalue() == "0 0 1.5\n1 1 2.0\n"


def test_stiffness_properties(coarse_disk_mesh):
    """Symmetric, constants in the kernel, affine functions harmonic at interior rows."""
    K = assemble_stiffness(coarse_disk_mesh)
    assert K.is_symmetric()
    assert np.allclose(K @ np.ones(K.dimension), 0.0, atol=1e-12)
    x = coarse_disk_mesh.vertices[:, 0] - 2.0 * coarse_disk_mesh.vertices[:, 1]
    interior = coarse_disk_mesh.interior_indices
    assert np.allclose((K @ x)[interior], 0.0, atol=1e-11)


def test_mass_matrices_integrate_one(coarse_disk_mesh):
    """Both mass matrices integrate 1 to the mesh area."""
    ones = np.ones(coarse_disk_mesh.n_vertices)
    lumped = assemble_mass(coarse_disk_mesh)
    consistent = assemble_mass(coarse_disk_mesh, lumped=False)
    assert lumped.is_diagonal
    assert not consistent.is_diagonal
    assert ones @ (lumped @ ones) == pytest.approx(coarse_disk_mesh.area)
    assert ones @ (consistent @ ones) == pytest.approx(coarse_disk_mesh.area)
    weights = lumped_weights(coarse_disk_mesh, coarse_disk_mesh.interior_indices)
    assert len(weights) == len(coarse_disk_mesh.interior_indices)
    assert np.all(weights > 0)


def test_restrict_and_plus():
    op = laplacian_1d(5)
    sub = op.restrict(np.array([1, 2, 3]))
    assert sub.dimension == 3
    assert np.array_equal(sub.diagonal(), [2.0, 2.0, 2.0])
    shifted = op.plus(SparseOperator.diagonal_matrix(np.ones(5)), alpha=-0.5)
    assert np.allclose(shifted.diagonal(), 1.5)
    assert op.add_diagonal(np.ones(5)).norm_inf() == pytest.approx(5.0)


# ============================================================================
# Linear solves
# ============================================================================

def test_solve_spd_residual():
    A = laplacian_1d(200)
    b = np.sin(np.linspace(0.0, 3.0, 200))
    x = solve_spd(A, b, tol=1e-10)
    assert np.linalg.norm(A @ x - b) <= 1e-10 * np.linalg.norm(b)


def test_solve_spd_zero_rhs():
    x = solve_spd(laplacian_1d(10), np.zeros(10))
    assert np.array_equal(x, np.zeros(10))


def test_solve_spd_iteration_cap(monkeypatch):
    """Ten iterations cannot solve an 800-point Laplacian."""
    monkeypatch.setattr(constants, "CG_ITERATION_FACTOR", 0)
    with pytest.raises(ConvergenceError) as excinfo:
        solve_spd(laplacian_1d(800), np.ones(800), tol=1e-10)
    assert excinfo.value.last_residual > 1e-10


def test_solve_spd_rejects_indefinite_diagonal():
    with pytest.raises(ConvergenceError):
        solve_spd(SparseOperator.diagonal_matrix([1.0, -1.0]), np.ones(2))


# ============================================================================
# Inertia and eigenpairs
# ============================================================================

def test_inertia_counts_negatives():
    assert inertia(SparseOperator.diagonal_matrix([-1.0, 2.0, 3.0])) == 1
    assert inertia(laplacian_1d(800, shift=1e-3)) == 8


def test_gershgorin_bound_is_below_spectrum():
    A = laplacian_1d(50, shift=1e-3)
    B = SparseOperator.diagonal_matrix(np.full(50, 2.0))
    smallest = np.linalg.eigvalsh(A.matrix.toarray())[0] / 2.0
    assert gershgorin_lower_bound(A, B) <= smallest


def test_dense_eigenpairs():
    """Small problems: exact values, B-normalized vectors, positive largest entry."""
    n = 40
    A = laplacian_1d(n)
    B = SparseOperator.diagonal_matrix(np.full(n, 0.5))
    pairs = smallest_eigenpairs(A, B, 3)
    for k, pair in enumerate(pairs, start=1):
        expected = (2.0 - 2.0 * math.cos(k * math.pi / (n + 1))) / 0.5
        assert pair.value == pytest.approx(expected, abs=1e-12)
        assert pair.vector @ (B @ pair.vector) == pytest.approx(1.0)
        assert pair.vector[np.argmax(np.abs(pair.vector))] > 0
        assert pair.residual < 1e-12


def test_sparse_eigenpairs_across_zero():
    """The shift-invert path finds all eight negatives and the two positives above them."""
    n = 800
    A = laplacian_1d(n, shift=1e-3)
    B = SparseOperator.diagonal_matrix(np.ones(n))
    pairs = smallest_eigenpairs(A, B, 10)
    expected = [2.0 - 2.0 * math.cos(k * math.pi / (n + 1)) - 1e-3 for k in range(1, 11)]
    assert [pair.value for pair in pairs] == pytest.approx(expected, abs=1e-9)
    assert sum(pair.value < 0 for pair in pairs) == 8
    assert all(pair.residual < 1e-8 for pair in pairs)
    # the lowest mode is a single sine arch
    assert np.all(pairs[0].vector > 0)


def test_eigenpairs_k_out_of_range():
    with pytest.raises(EigenSolverError):
        smallest_eigenpairs(laplacian_1d(5), SparseOperator.diagonal_matrix(np.ones(5)), 5)
    with pytest.raises(EigenSolverError):
        smallest_eigenpairs(laplacian_1d(5), SparseOperator.diagonal_matrix(np.ones(5)), 0)


def test_dirichlet_eigenvalue_of_unit_disk(disk_mesh):
    """The discrete λ₁ is close to j₀,₁² ≈ 5.7832."""
    interior = disk_mesh.interior_indices
    K = assemble_stiffness(disk_mesh).restrict(interior)
    M = assemble_mass(disk_mesh).restrict(interior)
    first = smallest_eigenpairs(K, M, 1)[0]
    assert first.value == pytest.approx(5.783185962947, rel=0.02)
    assert np.all(first.vector > 0)
