"""
The discrete Sobolev quotient

    J_λ(v) = (∫|∇v|² + λ∫v²) / (∫|v|^{p+1})^{2/(p+1)}

on interior degrees of freedom, with lumped (nodal) quadrature for the
power terms.
"""
import math
from typing import Dict, Optional

import numpy as np

from ..linalg.operators import SparseOperator, assemble_mass, assemble_stiffness
from ..mesh.triangulation import Mesh
from ..shared_libraries import constants
from ..shared_libraries.errors import PowerOverflowError
from ..shared_libraries.models import ProblemParams
from .field import Field

# exp() argument that still fits a double
LOG_CLAMP = 700.0


def positive_power(
    values: np.ndarray, exponent: float, p: float, log_domain: Optional[bool] = None
) -> np.ndarray:
    """
    |values|^exponent for nonnegative nodal data.

    In log-domain mode log|v| is clamped at -700/p before exponentiating,
    so small nodal values never underflow to an exact zero.
    """
    log_domain = constants.LOG_DOMAIN if log_domain is None else log_domain
    magnitude = np.abs(values)
    if log_domain:
        with np.errstate(divide="ignore"):
            logs = np.log(magnitude)
        logs = np.maximum(logs, -LOG_CLAMP / p)
        scaled = exponent * logs
        if np.any(scaled > LOG_CLAMP):
            raise PowerOverflowError(
                f"nodal value {magnitude.max():.3g} raised to {exponent:g} exceeds double range"
            )
        return np.exp(scaled)
    with np.errstate(over="raise"):
        try:
            return magnitude ** exponent
        except FloatingPointError as e:
            raise PowerOverflowError(
                f"u^{exponent:g} overflowed; set LEL_LOG_DOMAIN=True for log-domain powers"
            ) from e


class EnergyFunctional:
    """
    J_λ restricted to the interior vertices of a mesh.

    Holds the Dirichlet-eliminated stiffness K, the lumped mass weights m and
    A = K + λ·diag(m). Any exponent p ≥ 1 is accepted here; p = 1 gives the
    lumped Rayleigh quotient.
    """

    def __init__(self, mesh: Mesh, lam: float):
        if lam < 0:
            raise ValueError(f"lambda must be >= 0, got {lam}")
        self.mesh = mesh
        self.lam = float(lam)
        self.interior = mesh.interior_indices
        self.stiffness: SparseOperator = assemble_stiffness(mesh).restrict(self.interior)
        self.weights: np.ndarray = assemble_mass(mesh, lumped=True).diagonal()[self.interior]
        self.operator: SparseOperator = self.stiffness.add_diagonal(self.lam * self.weights)

    @property
    def dofs(self) -> int:
        return len(self.interior)

    def interior_of(self, field: Field) -> np.ndarray:
        if field.mesh is not self.mesh:
            raise ValueError("field lives on a different mesh")
        return field.interior_values

    def quotient_of(self, v: np.ndarray, p: float) -> float:
        """J_λ(v) for an interior vector; raises ValueError on the zero vector."""
        if p < 1:
            raise ValueError(f"quotient needs p >= 1, got {p}")
        scale = float(np.max(np.abs(v))) if len(v) else 0.0
        if scale == 0.0:
            raise ValueError("quotient of the zero field is undefined")
        w = v / scale
        numerator = float(w @ (self.operator.matrix @ w))
        power_integral = float(self.weights @ positive_power(w, p + 1.0, p))
        return numerator / power_integral ** (2.0 / (p + 1.0))

    def quotient(self, field: Field, p: float) -> float:
        return self.quotient_of(self.interior_of(field), p)

    def energy_terms(self, field: Field, p: float) -> Dict[str, float]:
        """∫|∇u|², ∫u², ∫u^{p+1} and ∫u^p of a field, the last three by lumped quadrature."""
        u = self.interior_of(field)
        return {
            "grad_sq": float(u @ (self.stiffness.matrix @ u)),
            "l2_sq": float(self.weights @ (u * u)),
            "int_u_p1": float(self.weights @ positive_power(u, p + 1.0, p)),
            "int_u_p": float(self.weights @ positive_power(u, p, p)),
        }

    def pde_defect(self, u: np.ndarray, p: float) -> np.ndarray:
        """A u - m∘u^p (weak residual of -Δu + λu = u^p)."""
        return self.operator.matrix @ u - self.weights * positive_power(u, p, p)

    def constraint_integral(self, v: np.ndarray, p: float) -> float:
        return float(self.weights @ positive_power(v, p + 1.0, p))


def quotient(field: Field, params: ProblemParams) -> float:
    """Discrete J_λ(field) for (λ, p)."""
    return EnergyFunctional(field.mesh, params.lam).quotient(field, params.p)


def epsilon_of(sup_norm: float, p: float) -> float:
    """Concentration scale 1/(√(p-1)·‖u‖∞^{(p-1)/2})."""
    return math.exp(-0.5 * math.log(p - 1.0) - 0.5 * (p - 1.0) * math.log(sup_norm))
