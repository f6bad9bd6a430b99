"""Verdicts on a solve: rescaled profile, star-shapedness, spectrum, bounds, concentration."""
from .bounds import bounds_report, bounds_row, evaluate_bounds, oracle_bounds_row
from .concentration import concentration_diagnostics
from .export import (
    write_bounds,
    write_profile,
    write_rows,
    write_violations,
)
from .profile import rescaled_profile, window_resolution
from .spectrum import h_equation_residual, linearization, linearized_spectrum
from .star_shape import exterior_first_eigenvalue, ring_h_values, star_shape_test

__all__ = [
    "bounds_report",
    "bounds_row",
    "concentration_diagnostics",
    "evaluate_bounds",
    "exterior_first_eigenvalue",
    "h_equation_residual",
    "linearization",
    "linearized_spectrum",
    "oracle_bounds_row",
    "rescaled_profile",
    "ring_h_values",
    "star_shape_test",
    "window_resolution",
    "write_bounds",
    "write_profile",
    "write_rows",
    "write_violations",
]
