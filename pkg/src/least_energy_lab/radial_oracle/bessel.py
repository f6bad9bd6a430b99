"""
First Dirichlet eigenvalue of the disk, λ₁ = (j₀,₁/R)².
"""
import math

from scipy.special import jn_zeros


def first_bessel_zero() -> float:
    """j₀,₁ ≈ 2.404825557695773."""
    return float(jn_zeros(0, 1)[0])


def bessel_lambda1(disk_radius: float) -> float:
    if not disk_radius > 0:
        raise ValueError(f"disk radius must be > 0, got {disk_radius}")
    return (first_bessel_zero() / disk_radius) ** 2


def amplitude_lower_bound(p: float, lam: float, disk_radius: float) -> float:
    """(λ + λ₁)^{1/(p-1)}, the lower bound on ‖u‖∞ for a positive solution on the disk."""
    return math.exp(math.log(lam + bessel_lambda1(disk_radius)) / (p - 1.0))
