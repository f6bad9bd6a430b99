"""
Tests for the radial ground truth on the disk: shooting, angular modes and cross-checks
against the finite element solver.

Run with: pytest tests/test_radial_oracle.py
"""
import math

import numpy as np
import pytest

from least_energy_lab.radial_oracle import (
    amplitude_lower_bound,
    amplitude_table,
    bessel_lambda1,
    first_bessel_zero,
    kernel_overlap,
    mode_grid,
    morse_index,
    oracle_concentration,
    oracle_profile,
    radial_linearized_modes,
    shoot,
)
from least_energy_lab.shared_libraries import constants
from least_energy_lab.shared_libraries.errors import GridTooCoarseError
from least_energy_lab.shared_libraries.models import SpectrumReport


# ============================================================================
# Bessel eigenvalue
# ============================================================================

def test_first_bessel_zero():
    assert first_bessel_zero() == pytest.approx(2.404825557695773, abs=1e-12)
    assert bessel_lambda1(1.0) == pytest.approx(5.783185962947, rel=1e-11)
    assert bessel_lambda1(2.0) == pytest.approx(5.783185962947 / 4.0, rel=1e-11)
    with pytest.raises(ValueError):
        bessel_lambda1(0.0)


def test_amplitude_lower_bound():
    assert amplitude_lower_bound(3.0, 0.0, 1.0) == pytest.approx(math.sqrt(bessel_lambda1(1.0)))
    assert amplitude_lower_bound(2.0, 1.0, 1.0) == pytest.approx(1.0 + bessel_lambda1(1.0))


# ============================================================================
# Shooting
# ============================================================================

def test_shoot_p3(oracle_p3):
    """Boundary condition, energy identity and the sup-norm lower bound."""
    sol = oracle_p3
    assert sol.u(0.0) == pytest.approx(sol.amplitude)
    assert sol.du(0.0) == pytest.approx(0.0, abs=1e-12)
    assert sol.u(1.0) == pytest.approx(0.0, abs=1e-8)
    assert sol.du(1.0) < 0
    assert sol.amplitude >= amplitude_lower_bound(3.0, 0.0, 1.0)
    assert sol.energy_defect < 1e-8
    terms = sol.integrals
    assert sol.c_squared == pytest.approx(terms["int_u_p1"] ** 0.5, rel=1e-7)
    assert sol.shoot_residual == 0.0


def test_shoot_trace_is_monotone(oracle_p3):
    rows = oracle_p3.trace_rows()
    assert rows[0]["r"] == 0.0
    assert rows[-1]["r"] == pytest.approx(1.0, rel=1e-12)
    assert np.all(np.diff(oracle_p3.values) <= 0)
    assert np.all(oracle_p3.derivative[1:] < 0)


def test_shoot_radius_scaling():
    """For λ = 0, u_R(r) = R^{-2/(p-1)}·u_1(r/R)."""
    unit = shoot(5.0)
    wide = shoot(5.0, disk_radius=2.0)
    assert wide.amplitude == pytest.approx(unit.amplitude * 2.0 ** -0.5, rel=1e-10)
    assert wide.u(1.0) == pytest.approx(unit.u(0.5) * 2.0 ** -0.5, rel=1e-8)


def test_shoot_with_lambda(oracle_p3):
    """λ > 0 raises the amplitude and brentq meets the radius to tolerance."""
    shifted = shoot(3.0, lam=1.0)
    assert shifted.amplitude > oracle_p3.amplitude
    assert shifted.amplitude >= amplitude_lower_bound(3.0, 1.0, 1.0)
    assert shifted.shoot_residual <= 1e-10
    assert shifted.energy_defect < 1e-6
    assert shifted.u(1.0) == pytest.approx(0.0, abs=1e-8)
    assert shifted.c_squared > oracle_p3.c_squared


@pytest.mark.parametrize("kwargs", [
    {"p": 1.0},
    {"p": 3.0, "lam": -1.0},
    {"p": 3.0, "disk_radius": 0.0},
])
def test_shoot_rejects_bad_arguments(kwargs):
    with pytest.raises(ValueError):
        shoot(**kwargs)


def test_radius_outside_disk(oracle_p3):
    with pytest.raises(ValueError):
        oracle_p3.u(1.5)


def test_large_p_regime(oracle_p100):
    """At p = 100 the amplitude sits near √e and the Sobolev ratio near its limit."""
    assert 1.0 <= oracle_p100.amplitude <= 2.5
    assert oracle_p100.sup_norm_pow > 1e10
    assert oracle_p100.energy_defect < 1e-6
    assert oracle_p100.sobolev_ratio <= 1.5 * constants.SOBOLEV_LIMIT
    assert oracle_p100.c_squared * 100.0 == pytest.approx(8.0 * math.pi * math.e, rel=0.25)


def test_amplitude_table_is_lambda_major():
    rows = amplitude_table([3.0, 5.0], [0.0, 1.0])
    assert [(row["lambda"], row["p"]) for row in rows] == [
        (0.0, 3.0), (0.0, 5.0), (1.0, 3.0), (1.0, 5.0)
    ]
    assert all(row["amplitude"] > 0 for row in rows)


# ============================================================================
# Profile and concentration
# ============================================================================

def test_oracle_profile_approaches_bubble():
    """The rescaled profile discrepancy shrinks as p grows."""
    discrepancies = [oracle_profile(shoot(p)).sup_discrepancy for p in (50.0, 100.0, 200.0)]
    assert discrepancies[0] > discrepancies[1] > discrepancies[2]
    assert discrepancies[2] <= 0.05


def test_oracle_profile_layout(oracle_p100):
    comparison = oracle_profile(oracle_p100)
    assert comparison.window_resolved
    assert comparison.phi_values[0] == 0.0
    expected = 1 + len(constants.PROFILE_RADII) * constants.PROFILE_ANGLES
    assert len(comparison.phi_values) + len(comparison.dropped_samples) == expected
    assert comparison.derivative_discrepancy is not None


def test_oracle_concentration(oracle_p100):
    record = oracle_concentration(oracle_p100)
    assert 0.0 < record.harnack_min <= 1.0
    assert 0.0 < record.concentration_fraction <= 1.0
    assert record.psi_integral == pytest.approx(record.bubble_mass, rel=0.1)
    assert record.f_max < 1.0
    assert oracle_p100.mass_fraction(1.0) == pytest.approx(1.0)


# ============================================================================
# Angular modes
# ============================================================================

def test_radial_modes_morse_index(oracle_p100):
    """Only mode 0 carries a negative eigenvalue; mode 1 matches the translation kernel."""
    reports = radial_linearized_modes(oracle_p100, k_max=2)
    assert [report.mode for report in reports] == [0, 1, 2]
    assert [report.negative_count for report in reports] == [1, 0, 0]
    assert all(report.morse_index_ok for report in reports)
    assert all(report.first_eigenvector_positive for report in reports)
    assert kernel_overlap(oracle_p100, reports[1]) >= 0.99
    with pytest.raises(ValueError):
        kernel_overlap(oracle_p100, reports[0])
    assert morse_index(reports) == 1


def test_morse_index_counts_angular_modes_twice():
    """A negative k ≥ 1 eigenvalue is doubled by the cos/sin pair."""
    def report(mode, negatives):
        return SpectrumReport.from_eigenvalues(
            [-1.0] * negatives + [1.0], 0.0, mode=mode, expected_negative=int(mode == 0)
        )

    assert morse_index([report(0, 1), report(1, 0), report(2, 0)]) == 1
    assert morse_index([report(0, 1), report(1, 1), report(2, 0)]) == 3
    assert morse_index([report(0, 2), report(1, 0), report(2, 1)]) == 4


def test_mode_grid(oracle_p100):
    centers, weights, step = mode_grid(oracle_p100)
    assert step <= 0.01
    assert centers[0] < 1e-3 * oracle_p100.epsilon * 1.01
    assert centers[-1] < 1.0
    assert np.sum(weights) == pytest.approx(0.5 * (1.0 - (1e-3 * oracle_p100.epsilon) ** 2))
    with pytest.raises(GridTooCoarseError):
        mode_grid(oracle_p100, step=0.1)


def test_radial_modes_argument_checks(oracle_p3):
    with pytest.raises(ValueError):
        radial_linearized_modes(oracle_p3, k_max=1)
    with pytest.raises(ValueError):
        radial_linearized_modes(oracle_p3, n_eigs=0)


# ============================================================================
# Cross-check against the finite element solver
# ============================================================================

def test_finite_elements_agree_with_shooting(disk_report, oracle_p3):
    """At h = 0.05 the discrete solve is within a few percent of the radial solution."""
    assert disk_report.sup_norm == pytest.approx(oracle_p3.amplitude, rel=0.03)
    assert disk_report.c_squared == pytest.approx(oracle_p3.c_squared, rel=0.03)
