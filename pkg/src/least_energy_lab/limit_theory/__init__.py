"""Closed-form limit objects: Liouville bubbles, kernel modes, Moser bounds, Robin function."""
from .bubble import Bubble, bubble_eval, bubble_mass, kernel_functions, limit_potential
from .modes import ModeShot, mode_operator_residual, mode_shoot, sample_kernel
from .moser import MoserBound, moser_bound, moser_c_squared_p_bound, moser_optimal_d, moser_quotient
from .robin import RobinField, robin_function, robin_sample_grid

__all__ = [
    "Bubble",
    "ModeShot",
    "MoserBound",
    "RobinField",
    "bubble_eval",
    "bubble_mass",
    "kernel_functions",
    "limit_potential",
    "mode_operator_residual",
    "mode_shoot",
    "moser_bound",
    "moser_c_squared_p_bound",
    "moser_optimal_d",
    "moser_quotient",
    "robin_function",
    "robin_sample_grid",
    "sample_kernel",
]
