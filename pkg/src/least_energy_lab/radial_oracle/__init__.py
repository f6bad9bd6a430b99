"""Radial ground truth on the disk: shooting, angular modes, Bessel eigenvalue."""
from .bessel import amplitude_lower_bound, bessel_lambda1, first_bessel_zero
from .modes import kernel_overlap, mode_grid, morse_index, radial_linearized_modes
from .shooting import (
    RadialSolution,
    ScaledProfile,
    amplitude_table,
    oracle_concentration,
    oracle_profile,
    shoot,
)

__all__ = [
    "RadialSolution",
    "ScaledProfile",
    "amplitude_lower_bound",
    "amplitude_table",
    "bessel_lambda1",
    "first_bessel_zero",
    "kernel_overlap",
    "mode_grid",
    "morse_index",
    "oracle_concentration",
    "oracle_profile",
    "radial_linearized_modes",
    "shoot",
]
