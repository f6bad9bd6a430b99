"""
Rescaled-ball quantities around the maximum point: the gradient ratio F,
the Harnack minimum, the ψ mass and the share of ∫u^p near x_p.
"""
import logging
import math
from typing import Optional

import numpy as np

from ..limit_theory.bubble import Bubble
from ..linalg.operators import lumped_weights
from ..shared_libraries import constants
from ..shared_libraries.models import ConcentrationRecord
from ..solver.energy import positive_power
from ..solver.minimize import SolveReport
from .profile import ring_offsets, window_resolution

logger = logging.getLogger(__name__)

RING_ANGLES = 32


def concentration_diagnostics(
    report: SolveReport,
    window_radius: float = constants.CONCENTRATION_WINDOW,
    rho: Optional[float] = None,
) -> ConcentrationRecord:
    """
    Over the rescaled ball |X| ≤ window_radius:

    - f_max: max over triangles of |∇u|²/(‖u‖∞^{p-1}·u²), u at the barycenter
    - harnack_min: min of u/‖u‖∞ over vertices in the ball and its rim
    - psi_integral: (p-1)∫u^{p-1} over the ball, as Σ |T|/ε²·mean((u/‖u‖∞)^{p-1})

    rho (default a tenth of the distance from x_p to the boundary) sets the
    ball for the ∫u^p share. An unresolved window is flagged, never hidden.
    """
    mesh = report.mesh
    field = report.solution
    p = report.p
    eps = report.epsilon
    sup = report.sup_norm
    center = np.asarray(report.max_point)
    _, resolved = window_resolution(report, window_radius)

    scaled = field.values / sup
    corner_values = scaled[mesh.triangles]
    rel = mesh.barycenters - center
    in_ball = np.hypot(rel[:, 0], rel[:, 1]) <= window_radius * eps
    if not in_ball.any():
        # window smaller than the triangle holding x_p
        in_ball = np.any(mesh.triangles == field.argmax, axis=1)

    gradients = field.gradients()[in_ball] / sup
    mean_value = corner_values[in_ball].mean(axis=1)
    # ‖u‖∞^{p-1}·ε² = 1/(p-1)
    ratio = (p - 1.0) * eps ** 2 * np.sum(gradients ** 2, axis=1) / mean_value ** 2

    psi = positive_power(corner_values[in_ball], p - 1.0, p).mean(axis=1)
    psi_integral = float(np.sum(mesh.areas[in_ball] * psi) / eps ** 2)

    vertex_rel = mesh.vertices - center
    near = np.hypot(vertex_rel[:, 0], vertex_rel[:, 1]) <= window_radius * eps
    rim = field.at(center + eps * ring_offsets([window_radius], RING_ANGLES)[1:])
    candidates = np.concatenate([scaled[near], rim[np.isfinite(rim)] / sup])
    harnack = float(candidates.min())

    if rho is None:
        rho = 0.1 * float(mesh.distance_to_boundary(center[None, :])[0])
    powers = positive_power(field.values, p, p) * lumped_weights(mesh)
    inside = np.hypot(vertex_rel[:, 0], vertex_rel[:, 1]) <= rho
    fraction = float(powers[inside].sum() / powers.sum())

    logger.debug(
        f"concentration p={p:g}: F max {ratio.max():.4g}, min u/M {harnack:.4g}, "
        f"psi mass {psi_integral:.4g}"
    )
    return ConcentrationRecord(
        p=p,
        lam=report.lam,
        window_radius=window_radius,
        f_max=float(ratio.max()),
        harnack_min=harnack,
        psi_integral=psi_integral,
        bubble_mass=Bubble.limit_profile().mass(window_radius),
        window_resolved=bool(resolved),
        concentration_fraction=fraction,
    )
