"""
Tests for the discrete quotient, the least-energy minimizer and continuation in p.

Run with: pytest tests/test_energy_solver.py
"""
import importlib
import math

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from least_energy_lab.shared_libraries.errors import (
    ContinuationError,
    PowerOverflowError,
    SnapshotFormatError,
    StagnationError,
)
from least_energy_lab.shared_libraries.models import ProblemParams
from least_energy_lab.solver import (
    EnergyFunctional,
    Field,
    continue_in_p,
    default_schedule,
    epsilon_of,
    first_dirichlet_eigenvalue,
    first_eigenfunction,
    gaussian_bump,
    minimize,
    probe_branch_uniqueness,
    quotient,
    read_snapshot,
    transfer_field,
    write_snapshot,
)
from least_energy_lab.solver.energy import positive_power

minimize_module = importlib.import_module("least_energy_lab.solver.minimize")


# ============================================================================
# Powers and the quotient
# ============================================================================

def test_positive_power_modes_agree():
    values = np.array([0.3, 1.0, 2.5, -1.5])
    expected = np.abs(values) ** 3.5
    assert np.allclose(positive_power(values, 3.5, 2.5, log_domain=True), expected, rtol=1e-13)
    assert np.allclose(positive_power(values, 3.5, 2.5, log_domain=False), expected, rtol=1e-13)


def test_positive_power_overflow():
    """Both modes report an overflow instead of returning inf."""
    with pytest.raises(PowerOverflowError):
        positive_power(np.array([1e10]), 100.0, 100.0, log_domain=True)
    with pytest.raises(PowerOverflowError):
        positive_power(np.array([1e10]), 100.0, 100.0, log_domain=False)


def test_functional_rejects_bad_input(coarse_disk_mesh):
    with pytest.raises(ValueError):
        EnergyFunctional(coarse_disk_mesh, -1.0)
    functional = EnergyFunctional(coarse_disk_mesh, 0.0)
    with pytest.raises(ValueError, match="zero"):
        functional.quotient_of(np.zeros(functional.dofs), 3.0)
    with pytest.raises(ValueError, match="p >= 1"):
        functional.quotient_of(np.ones(functional.dofs), 0.5)


def test_quotient_at_p_one_is_rayleigh(coarse_disk_mesh):
    """With p = 1 and λ = 0 the eigenfunction attains the discrete λ₁."""
    phi = first_eigenfunction(coarse_disk_mesh)
    lam1 = first_dirichlet_eigenvalue(coarse_disk_mesh)
    rayleigh = EnergyFunctional(coarse_disk_mesh, 0.0).quotient(phi, 1.0)
    assert rayleigh == pytest.approx(lam1, rel=1e-10)
    assert phi.sup_norm == pytest.approx(1.0)


@given(st.floats(min_value=1e-3, max_value=1e3))
@settings(
    max_examples=25, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture]
)
def test_quotient_is_scale_invariant(coarse_disk_mesh, factor):
    bump = gaussian_bump(coarse_disk_mesh)
    params = ProblemParams(lam=0.5, p=4.0)
    assert quotient(bump.scaled(factor), params) == pytest.approx(quotient(bump, params), rel=1e-10)


def test_epsilon_of():
    assert epsilon_of(1.0, 5.0) == pytest.approx(0.5)
    assert epsilon_of(2.0, 3.0) == pytest.approx(1.0 / (math.sqrt(2.0) * 2.0))


# ============================================================================
# Fields
# ============================================================================

def test_field_must_vanish_on_boundary(coarse_disk_mesh):
    values = np.ones(coarse_disk_mesh.n_vertices)
    with pytest.raises(ValueError, match="boundary"):
        Field(coarse_disk_mesh, values)
    with pytest.raises(ValueError):
        Field(coarse_disk_mesh, np.ones(3))


def test_field_values_are_read_only(coarse_disk_mesh):
    bump = gaussian_bump(coarse_disk_mesh)
    with pytest.raises(ValueError):
        bump.values[0] = 1.0


def test_transfer_field_between_meshes(coarse_disk_mesh, disk_mesh):
    """Transfer keeps boundary zeros and is exact at shared points up to interpolation error."""
    bump = gaussian_bump(disk_mesh)
    moved = transfer_field(bump, coarse_disk_mesh)
    assert moved.mesh is coarse_disk_mesh
    assert np.all(moved.values[coarse_disk_mesh.boundary_mask] == 0.0)
    exact = gaussian_bump(coarse_disk_mesh)
    interior = coarse_disk_mesh.interior_indices
    assert np.max(np.abs(moved.values[interior] - exact.values[interior])) < 0.05
    assert transfer_field(bump, disk_mesh) is bump


# ============================================================================
# Minimization
# ============================================================================

def test_minimize_solves_the_discrete_equation(coarse_disk_report):
    """Residual at tolerance, positive interior values, energy identities hold."""
    report = coarse_disk_report
    assert report.pde_residual <= 1e-9
    assert np.all(report.solution.interior_values > 0)
    terms = report.energy_terms
    assert terms["grad_sq"] == pytest.approx(terms["int_u_p1"], rel=1e-6)
    assert report.c_squared == pytest.approx(terms["int_u_p1"] ** (2.0 / 4.0), rel=1e-6)
    assert report.p_path == [3.0]


def test_sup_norm_lower_bound(coarse_disk_report, coarse_disk_mesh):
    """‖u‖∞^{p-1} ≥ λ₁ʰ holds exactly for the discrete solution."""
    lam1 = first_dirichlet_eigenvalue(coarse_disk_mesh)
    assert coarse_disk_report.sup_norm >= lam1 ** 0.5 * (1 - 1e-9)


def test_disk_solution_peaks_at_center(coarse_disk_report):
    assert coarse_disk_report.max_point_boundary_distance > 0.85
    assert math.hypot(*coarse_disk_report.max_point) < 0.15


def test_solution_keeps_mirror_symmetry(coarse_disk_mesh, coarse_disk_report):
    """From the symmetric eigenfunction start the solution is symmetric to machine precision."""
    u = coarse_disk_report.solution.values
    for axis in (0, 1):
        perm = coarse_disk_mesh.mirror_permutation(axis)
        assert np.max(np.abs(u - u[perm])) <= 1e-12 * np.max(np.abs(u))


def test_asymmetric_start_is_not_projected(coarse_disk_mesh):
    assert len(minimize_module._mirrors_of(first_eigenfunction(coarse_disk_mesh))) == 2
    bump = gaussian_bump(coarse_disk_mesh, (0.2, 0.1))
    assert minimize_module._mirrors_of(bump) == ()


def test_c_squared_increases_with_lambda(coarse_disk_mesh, coarse_disk_report):
    shifted = minimize(ProblemParams(lam=1.0, p=3.0), coarse_disk_mesh)
    assert shifted.c_squared > coarse_disk_report.c_squared


def test_minimize_rejects_zero_init(coarse_disk_mesh):
    zero = Field(coarse_disk_mesh, np.zeros(coarse_disk_mesh.n_vertices))
    with pytest.raises(ValueError, match="zero"):
        minimize(ProblemParams(lam=0.0, p=3.0), coarse_disk_mesh, init=zero)


def test_minimize_from_bump_reaches_same_level(coarse_disk_mesh, coarse_disk_report):
    """A different positive start converges to the same c²."""
    init = gaussian_bump(coarse_disk_mesh, (0.2, 0.1))
    report = minimize(ProblemParams(lam=0.0, p=3.0), coarse_disk_mesh, init=init)
    assert report.c_squared == pytest.approx(coarse_disk_report.c_squared, rel=1e-6)


def test_probe_branch_uniqueness(coarse_disk_mesh):
    summary = probe_branch_uniqueness(ProblemParams(lam=0.0, p=3.0), coarse_disk_mesh, trials=2)
    assert summary["trials"] == 2.0
    assert summary["relative_spread"] < 1e-6


# ============================================================================
# Continuation
# ============================================================================

def test_default_schedule():
    assert default_schedule(10.0) == pytest.approx([3.0, 4.5, 6.75, 10.0])
    assert default_schedule(2.5) == [2.5]
    assert default_schedule(20.0, start=2.0, ratio=2.0) == [2.0, 4.0, 8.0, 16.0, 20.0]


@pytest.mark.parametrize("schedule", [[3.0, 3.0, 10.0], [3.0, 4.0], [6.0, 8.0, 10.0]])
def test_continue_in_p_validates_schedule(coarse_disk_mesh, schedule):
    with pytest.raises(ValueError):
        continue_in_p(ProblemParams(lam=0.0, p=10.0), coarse_disk_mesh, schedule=schedule)


def test_continue_in_p_tracks_the_branch(coarse_disk_mesh):
    reports = continue_in_p(ProblemParams(lam=0.0, p=4.5), coarse_disk_mesh, schedule=[3.0, 4.5])
    assert [r.p for r in reports] == [3.0, 4.5]
    assert reports[0].max_point_drift is None
    assert reports[1].max_point_drift == pytest.approx(0.0, abs=1e-12)
    assert reports[1].p_path == [3.0, 4.5]
    # the sup norm bound (λ₁ʰ)^{1/(p-1)} decreases in p, the solution stays above it
    lam1 = first_dirichlet_eigenvalue(coarse_disk_mesh)
    assert reports[1].sup_norm >= lam1 ** (1.0 / 3.5)


def test_continuation_error_keeps_completed_stages(coarse_disk_mesh, coarse_disk_report, mocker):
    """A failing stage reports its exponent and the stages solved before it."""
    failure = StagnationError("stalled", last_residual=1.0, last_iterate=None)
    mocker.patch.object(minimize_module, "minimize", side_effect=[coarse_disk_report, failure])
    with pytest.raises(ContinuationError) as excinfo:
        continue_in_p(ProblemParams(lam=0.0, p=4.5), coarse_disk_mesh, schedule=[3.0, 4.5])
    assert excinfo.value.stage == 4.5
    assert len(excinfo.value.completed) == 1
    assert excinfo.value.completed[0].p == 3.0


# ============================================================================
# Snapshots
# ============================================================================

def test_snapshot_round_trip(tmp_path, coarse_disk_report):
    path = write_snapshot(coarse_disk_report.solution, 3.0, 0.25, tmp_path / "u.txt")
    assert path.read_text().splitlines()[0].startswith("field vertices=")
    field, p, lam = read_snapshot(path, coarse_disk_report.mesh)
    assert (p, lam) == (3.0, 0.25)
    assert np.array_equal(field.values, coarse_disk_report.solution.values)


def test_snapshot_errors(tmp_path, coarse_disk_mesh, square_mesh):
    bad = tmp_path / "bad.txt"
    bad.write_text("u 3\n0\n0\n0\n")
    with pytest.raises(SnapshotFormatError, match="header"):
        read_snapshot(bad, coarse_disk_mesh)
    path = write_snapshot(gaussian_bump(square_mesh), 3.0, 0.0, tmp_path / "square.txt")
    with pytest.raises(SnapshotFormatError, match="vertices"):
        read_snapshot(path, coarse_disk_mesh)

