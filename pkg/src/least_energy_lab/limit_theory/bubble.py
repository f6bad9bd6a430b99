"""
Liouville bubbles U_{μ,y}(x) = log(8μ² / (1 + μ²|x-y|²)²), solutions of -ΔU = e^U
in ℝ² with total mass 8π, and the bounded kernel of the linearization at U_{μ̄,0}.
"""
import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from ..shared_libraries.constants import BUBBLE_TOTAL_MASS, MU_BAR_SQUARED
from ..shared_libraries.models import Point

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class Bubble:
    """U_{μ,y}, parametrized by μ² so that μ̄² = 1/8 stays exact."""
    mu_squared: float = MU_BAR_SQUARED
    center: Point = (0.0, 0.0)

    def __post_init__(self):
        if not self.mu_squared > 0:
            raise ValueError(f"bubble scale mu^2 must be > 0, got {self.mu_squared}")

    @property
    def mu(self) -> float:
        return math.sqrt(self.mu_squared)

    @classmethod
    def limit_profile(cls) -> "Bubble":
        """U_{μ̄,0} with μ̄² = 1/8."""
        return cls()

    def radial(self, r: ArrayLike) -> ArrayLike:
        mu_sq = self.mu_squared
        return math.log(8.0 * mu_sq) - 2.0 * np.log1p(mu_sq * np.square(r))

    def radial_derivative(self, r: ArrayLike) -> ArrayLike:
        mu_sq = self.mu_squared
        return -4.0 * mu_sq * np.asarray(r) / (1.0 + mu_sq * np.square(r))

    def __call__(self, x: np.ndarray) -> ArrayLike:
        pts = np.asarray(x, dtype=float)
        rel = pts - np.asarray(self.center)
        r = np.hypot(rel[..., 0], rel[..., 1])
        return self.radial(r)

    def mass(self, radius: float) -> float:
        """∫_{B(y, radius)} e^U = 8π·μ²ρ²/(1 + μ²ρ²); 8π for an infinite radius."""
        if radius <= 0:
            raise ValueError(f"radius must be > 0, got {radius}")
        if math.isinf(radius):
            return BUBBLE_TOTAL_MASS
        t = self.mu_squared * radius ** 2
        return BUBBLE_TOTAL_MASS * t / (1.0 + t)


def bubble_eval(bubble: Bubble, x: Point) -> float:
    return float(bubble(np.asarray(x, dtype=float)))


def bubble_mass(bubble: Bubble, radius: float) -> float:
    return bubble.mass(radius)


def kernel_functions(r: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
    """ζ₀(r) = (8 - r²)/(8 + r²) and ζ₁(r) = r/(1 + r²/8)."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("kernel functions are defined for r >= 0")
    zeta0 = (8.0 - r ** 2) / (8.0 + r ** 2)
    zeta1 = r / (1.0 + r ** 2 / 8.0)
    if zeta0.ndim == 0:
        return float(zeta0), float(zeta1)
    return zeta0, zeta1


def limit_potential(r: ArrayLike) -> ArrayLike:
    """e^{U_{μ̄,0}} = 1/(1 + r²/8)²."""
    return 1.0 / (1.0 + np.square(r) / 8.0) ** 2
