"""
Angular modes of the linearized Liouville operator at U_{μ̄,0}:

    A_k ψ = -ψ'' - ψ'/r + k²ψ/r² - ψ/(1 + r²/8)²

Bounded solutions of A_k ψ = 0 exist only for k = 0 (ζ₀) and k = 1 (ζ₁).
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..shared_libraries.errors import GridTooCoarseError, IntegrationError
from ..shared_libraries.models import GrowthVerdict, RadialMode
from .bubble import kernel_functions

logger = logging.getLogger(__name__)

MAX_RESIDUAL_STEP = 1e-2
MIN_RESIDUAL_RADIUS = 10.0
# Central differences of ψ'/r lose an order next to the origin
RESIDUAL_INNER_RADIUS = 0.1
SHOOT_STEP = 1e-3
# Series start radius and number of series terms
SHOOT_START = 0.1
SERIES_TERMS = 12
MIN_SHOOT_RADIUS = 50.0
GROWTH_FACTOR = 10.0


def mode_operator_residual(mode: RadialMode, inner_radius: float = RESIDUAL_INNER_RADIUS) -> float:
    """
    max |A_k ψ| by second-order central differences over grid points r ≥ inner_radius.

    Raises:
        GridTooCoarseError: non-uniform grid, step above 1e-2 or r_max below 10
    """
    grid = mode.grid
    if len(grid) < 3:
        raise GridTooCoarseError("mode grid needs at least three points")
    steps = np.diff(grid)
    h = float(steps[0])
    if not np.allclose(steps, h, rtol=1e-6, atol=0.0):
        raise GridTooCoarseError("mode grid must be uniform")
    if h > MAX_RESIDUAL_STEP:
        raise GridTooCoarseError(f"grid step {h:g} exceeds {MAX_RESIDUAL_STEP:g}")
    if grid[-1] < MIN_RESIDUAL_RADIUS:
        raise GridTooCoarseError(
            f"grid ends at r={grid[-1]:g}, needs r_max >= {MIN_RESIDUAL_RADIUS:g}"
        )

    psi = mode.values
    r = grid[1:-1]
    centre = psi[1:-1]
    second = (psi[2:] - 2.0 * centre + psi[:-2]) / h ** 2
    first = (psi[2:] - psi[:-2]) / (2.0 * h)
    with np.errstate(divide="ignore", invalid="ignore"):
        potential = 1.0 / (1.0 + r ** 2 / 8.0) ** 2
        residual = -second - first / r + mode.k ** 2 * centre / r ** 2 - potential * centre
    keep = r >= inner_radius
    return float(np.max(np.abs(residual[keep])))


def sample_kernel(k: int, step: float = 1e-3, r_max: float = 10.0) -> RadialMode:
    """ζ₀ (k=0) or ζ₁ (k=1) on a uniform grid."""
    if k not in (0, 1):
        raise ValueError(f"bounded kernel functions exist for k in (0, 1), got {k}")
    grid = np.arange(0.0, r_max + 0.5 * step, step)
    zeta0, zeta1 = kernel_functions(grid)
    return RadialMode(k, grid, zeta0 if k == 0 else zeta1)


@dataclass
class ModeShot:
    """Outcome of integrating A_k ψ = 0 outward from the origin."""
    k: int
    verdict: GrowthVerdict
    trace: RadialMode
    near_max: float
    far_max: float
    second_growth_rate: Optional[float] = None
    second_trace: Optional[RadialMode] = None

    def __iter__(self):
        yield self.verdict
        yield self.trace


def _series(k: int, r):
    """Regular solution r^k Σ a_j r^{2j} of A_k ψ = 0 near the origin and its derivative."""
    potential = [(-1.0) ** j * (j + 1) / 8.0 ** j for j in range(SERIES_TERMS)]
    coeffs = [1.0]
    for j in range(1, SERIES_TERMS):
        convolution = sum(potential[i] * coeffs[j - 1 - i] for i in range(j))
        coeffs.append(-convolution / (4.0 * j * (k + j)))
    r = np.asarray(r, dtype=float)
    psi = sum(c * r ** (k + 2 * j) for j, c in enumerate(coeffs))
    dpsi = sum(
        c * (k + 2 * j) * r ** (k + 2 * j - 1) for j, c in enumerate(coeffs) if k + 2 * j > 0
    )
    return psi, dpsi


def _rhs(k: int, r: float, psi: float, dpsi: float) -> float:
    potential = 1.0 / (1.0 + r * r / 8.0) ** 2
    return -dpsi / r + k * k * psi / (r * r) - potential * psi


def _rk4(k: int, r0: float, psi: float, dpsi: float, r_max: float, step: float):
    n = int(math.ceil((r_max - r0) / step))
    grid = np.empty(n + 1)
    values = np.empty(n + 1)
    grid[0], values[0] = r0, psi
    r = r0
    for i in range(1, n + 1):
        k1p, k1d = dpsi, _rhs(k, r, psi, dpsi)
        half = r + 0.5 * step
        k2p = dpsi + 0.5 * step * k1d
        k2d = _rhs(k, half, psi + 0.5 * step * k1p, k2p)
        k3p = dpsi + 0.5 * step * k2d
        k3d = _rhs(k, half, psi + 0.5 * step * k2p, k3p)
        k4p, k4d = dpsi + step * k3d, _rhs(k, r + step, psi + step * k3p, dpsi + step * k3d)
        psi += step * (k1p + 2.0 * k2p + 2.0 * k3p + k4p) / 6.0
        dpsi += step * (k1d + 2.0 * k2d + 2.0 * k3d + k4d) / 6.0
        r = r0 + i * step
        if not (math.isfinite(psi) and math.isfinite(dpsi)):
            raise IntegrationError(f"mode integration diverged at r={r:.4g}", radius=r)
        grid[i], values[i] = r, psi
    return grid, values


def mode_shoot(k: int, r_max: float = 60.0, step: float = SHOOT_STEP) -> ModeShot:
    """
    Integrate the regular branch ψ ~ r^k of A_k ψ = 0 by classical RK4.

    Values on [0, 0.1] come from the power series of the regular solution,
    which also supplies the initial data for the step-1e-3 integration. The
    verdict is bounded iff max|ψ| on [0, r_max] ≤ 10·max|ψ| on [0, 1].
    For k = 0 and k = 1 the second, singular solution (log r and 1/r at
    the origin) is integrated too and its far-field growth rate fitted
    against log r (k = 0) or r (k = 1).

    Raises:
        ValueError: k < 0 or r_max < 50
        IntegrationError: non-finite values, with the radius reached
    """
    if k < 0:
        raise ValueError(f"mode index must be >= 0, got {k}")
    if r_max < MIN_SHOOT_RADIUS:
        raise ValueError(f"r_max must be >= {MIN_SHOOT_RADIUS:g}, got {r_max}")
    r0 = SHOOT_START
    psi0, dpsi0 = (float(v) for v in _series(k, r0))
    grid, values = _rk4(k, r0, psi0, dpsi0, r_max, step)
    core = np.arange(0, int(round(r0 / step))) * step
    grid = np.concatenate([core, grid])
    values = np.concatenate([_series(k, core)[0], values])
    trace = RadialMode(k, grid, values)

    near_max = float(np.max(np.abs(values[grid <= 1.0])))
    far_max = float(np.max(np.abs(values)))
    bounded = far_max <= GROWTH_FACTOR * near_max
    verdict = GrowthVerdict.BOUNDED if bounded else GrowthVerdict.UNBOUNDED

    second_rate, second_trace = None, None
    if k in (0, 1):
        if k == 0:
            s_grid, s_values = _rk4(0, r0, math.log(r0), 1.0 / r0, r_max, step)
            basis = np.log(s_grid)
        else:
            s_grid, s_values = _rk4(1, r0, 1.0 / r0, -1.0 / r0 ** 2, r_max, step)
            basis = s_grid
        window = s_grid >= 0.5 * r_max
        second_rate = float(np.polyfit(basis[window], s_values[window], 1)[0])
        second_trace = RadialMode(k, s_grid, s_values)

    logger.debug(f"mode k={k}: near {near_max:.4g}, far {far_max:.4g}, {verdict.value}")
    return ModeShot(
        k=k,
        verdict=verdict,
        trace=trace,
        near_max=near_max,
        far_max=far_max,
        second_growth_rate=second_rate,
        second_trace=second_trace,
    )
