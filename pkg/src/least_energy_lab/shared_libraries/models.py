"""
Data models shared across the lab: problem parameters and report records.
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

Point = Tuple[float, float]


class CheckName(Enum):
    """Checks the harness can run."""
    BOUNDS = "bounds"
    PROFILE = "profile"
    STAR = "star"
    SPECTRUM = "spectrum"
    ROBIN = "robin"
    MOSER = "moser"
    LIMIT_KERNEL = "limit_kernel"
    ORACLE_COMPARE = "oracle_compare"


class CheckStatus(Enum):
    """Verdict of one claim."""
    PASS = "pass"
    FAIL = "fail"
    UNRESOLVED = "unresolved"


class GrowthVerdict(Enum):
    """Far-field behaviour of a radial mode."""
    BOUNDED = "bounded"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class ProblemParams:
    """λ ≥ 0 and exponent p > 1 of -Δu + λu = u^p."""
    lam: float
    p: float

    def __post_init__(self):
        if not math.isfinite(self.lam) or self.lam < 0:
            raise ValueError(f"lambda must be finite and >= 0, got {self.lam}")
        if not math.isfinite(self.p) or self.p <= 1:
            raise ValueError(f"p must be finite and > 1, got {self.p}")

    def with_p(self, p: float) -> "ProblemParams":
        return ProblemParams(lam=self.lam, p=p)


@dataclass(frozen=True)
class GradingSpec:
    """Mesh size inner_h inside B(focus, transition_radius), coarsening to outer_h outside."""
    focus: Point
    inner_h: float
    outer_h: float
    transition_radius: float

    def __post_init__(self):
        if not 0 < self.inner_h <= self.outer_h:
            raise ValueError(
                f"grading needs 0 < inner_h <= outer_h, got {self.inner_h}, {self.outer_h}"
            )
        if self.transition_radius <= 0:
            raise ValueError(f"transition_radius must be > 0, got {self.transition_radius}")
        object.__setattr__(self, "focus", (float(self.focus[0]), float(self.focus[1])))


@dataclass
class EigenPair:
    """One generalized eigenpair A v = value·B v with ‖v‖_B = 1."""
    value: float
    vector: np.ndarray = field(repr=False)
    residual: float


@dataclass
class ProfileComparison:
    """Rescaled profile φ sampled on circles |X| = r, against the limit bubble."""
    p: float
    lam: float
    epsilon: float
    sample_radii: List[float]
    sample_points: np.ndarray = field(repr=False)
    phi_values: np.ndarray = field(repr=False)
    bubble_values: np.ndarray = field(repr=False)
    sup_discrepancy: float
    window_resolved: bool
    dropped_samples: List[Point] = field(default_factory=list)
    derivative_discrepancy: Optional[float] = None
    local_h: Optional[float] = None

    @property
    def reliable(self) -> bool:
        return self.window_resolved

    def rows(self) -> List[Dict[str, Any]]:
        """One CSV row per retained sample."""
        rows = []
        for (x1, x2), phi, bubble in zip(self.sample_points, self.phi_values, self.bubble_values):
            rows.append({
                'p': self.p,
                'lambda': self.lam,
                'X1': float(x1),
                'X2': float(x2),
                'radius': float(math.hypot(x1, x2)),
                'phi': float(phi),
                'bubble': float(bubble),
                'discrepancy': float(abs(phi - bubble)),
            })
        return rows


@dataclass
class StarViolation:
    """A triangle whose gradient does not point towards the maximum point."""
    triangle: int
    barycenter: Point
    value: float


@dataclass
class StarShapeReport:
    """Sign scan of (x_T - x_p)·∇u_T outside the core ball and the boundary strip."""
    violations: List[StarViolation]
    excluded_core_radius: float
    excluded_boundary_width: float
    h_ring_min: float
    h_ring_max: float
    triangles_tested: int
    exterior_first_eigenvalue: Optional[float] = None

    @property
    def h_values_on_ring(self) -> Tuple[float, float]:
        return self.h_ring_min, self.h_ring_max

    @property
    def star_shaped(self) -> bool:
        return not self.violations and self.h_ring_max < 0


@dataclass
class SpectrumReport:
    """Smallest eigenvalues of -Δ + λ - p·u^{p-1} (mass weighted) with sign counts."""
    eigenvalues: List[float]
    negative_count: int
    min_abs_eigenvalue: float
    morse_index_ok: bool
    nondegenerate_ok: bool
    gap: float
    mode: Optional[int] = None
    first_eigenvector_positive: Optional[bool] = None
    eigenvectors: Optional[np.ndarray] = field(default=None, repr=False)

    @classmethod
    def from_eigenvalues(
        cls,
        eigenvalues: Sequence[float],
        gap: float,
        negative_count: Optional[int] = None,
        expected_negative: int = 1,
        **kwargs,
    ) -> "SpectrumReport":
        values = sorted(float(v) for v in eigenvalues)
        if negative_count is None:
            negative_count = sum(1 for v in values if v < 0)
        min_abs = min(abs(v) for v in values) if values else math.inf
        return cls(
            eigenvalues=values,
            negative_count=int(negative_count),
            min_abs_eigenvalue=min_abs,
            morse_index_ok=negative_count == expected_negative,
            nondegenerate_ok=min_abs > gap,
            gap=gap,
            **kwargs,
        )


@dataclass
class BoundsRow:
    """Quantitative bounds for one (λ, p) solve."""
    p: float
    lam: float
    sup_norm: float
    sup_norm_pow: float
    c_squared: float
    c_squared_p: float
    p_int_u_p1: float
    p_energy: float
    sobolev_ratio: float
    lower_bound: float
    moser_bound: Optional[float] = None
    max_point_boundary_distance: Optional[float] = None

    def to_row(self) -> Dict[str, Any]:
        return {
            'p': self.p,
            'lambda': self.lam,
            'sup_norm': self.sup_norm,
            'sup_norm_pow': self.sup_norm_pow,
            'c_squared': self.c_squared,
            'c_squared_p': self.c_squared_p,
            'p_int_u_p1': self.p_int_u_p1,
            'p_energy': self.p_energy,
            'sobolev_ratio': self.sobolev_ratio,
            'lower_bound': self.lower_bound,
            'moser_bound': self.moser_bound,
            'max_point_boundary_distance': self.max_point_boundary_distance,
        }


@dataclass
class ConcentrationRecord:
    """Rescaled-ball diagnostics: gradient ratio F, Harnack minimum, ψ mass."""
    p: float
    lam: float
    window_radius: float
    f_max: float
    harnack_min: float
    psi_integral: float
    bubble_mass: float
    window_resolved: bool
    concentration_fraction: Optional[float] = None

    @property
    def mass_discrepancy(self) -> float:
        return abs(self.psi_integral - self.bubble_mass)


@dataclass
class RadialMode:
    """Angular mode ψ_k sampled on a radial grid."""
    k: int
    grid: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.k < 0:
            raise ValueError(f"mode index must be >= 0, got {self.k}")
        if self.grid.shape != self.values.shape or self.grid.ndim != 1:
            raise ValueError("grid and values must be 1-D arrays of equal length")
        if self.k >= 1 and self.grid[0] == 0.0 and self.values[0] != 0.0:
            raise ValueError(f"mode k={self.k} must vanish at r=0, got {self.values[0]}")

    def normalized(self) -> "RadialMode":
        scale = np.max(np.abs(self.values))
        if scale == 0:
            return self
        return RadialMode(self.k, self.grid, self.values / scale)


@dataclass
class ClaimResult:
    """Verdict of one claim in the checks matrix."""
    claim: str
    check: CheckName
    status: CheckStatus
    measured: Optional[float] = None
    threshold: Optional[float] = None
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            'claim': self.claim,
            'check': self.check.value,
            'status': self.status.value,
            'measured': self.measured,
            'threshold': self.threshold,
            'detail': self.detail,
        }
