"""
Rescaled profile φ(X) = (p-1)·log(u(x_p + εX)/‖u‖∞) against the limit bubble.
"""
import logging
import math
from typing import Sequence, Tuple

import numpy as np

from ..limit_theory.bubble import Bubble
from ..shared_libraries import constants
from ..shared_libraries.models import ProfileComparison
from ..solver.minimize import SolveReport

logger = logging.getLogger(__name__)


def window_resolution(report: SolveReport, window_radius: float) -> Tuple[float, bool]:
    """Local mesh size over B(x_p, window_radius·ε) and whether ε ≥ factor·h there."""
    local_h = report.mesh.local_h(report.max_point, window_radius * report.epsilon)
    return local_h, report.epsilon >= constants.WINDOW_RESOLUTION_FACTOR * local_h


def ring_offsets(radii: Sequence[float], angles: int) -> np.ndarray:
    """X = 0 followed by ``angles`` equally spaced points on each circle |X| = r."""
    theta = 2.0 * math.pi * np.arange(angles) / angles
    rings = [np.column_stack([r * np.cos(theta), r * np.sin(theta)]) for r in radii]
    return np.vstack([np.zeros((1, 2)), *rings])


def rescaled_profile(
    report: SolveReport,
    radii: Sequence[float] = constants.PROFILE_RADII,
    angles: int = constants.PROFILE_ANGLES,
) -> ProfileComparison:
    """
    Sample φ by P1 interpolation on circles |X| = r (plus X = 0).

    Samples falling outside the domain, or on the zero set of u, are
    dropped and listed. When ε is below LEL_WINDOW_RESOLUTION_FACTOR local
    mesh sizes the comparison is returned but marked unresolved.
    """
    field = report.solution
    sup = report.sup_norm
    eps = report.epsilon
    center = np.asarray(report.max_point)
    local_h, resolved = window_resolution(report, max(radii))
    if not resolved:
        logger.warning(
            f"profile at p={report.p:g}: epsilon {eps:.3e} below "
            f"{constants.WINDOW_RESOLUTION_FACTOR:g} x local h {local_h:.3e}"
        )

    offsets = ring_offsets(radii, angles)
    values = field.at(center + eps * offsets[1:])
    keep = np.isfinite(values) & (values > 0)
    dropped = [(float(x), float(y)) for x, y in offsets[1:][~keep]]

    # the P1 interpolant never exceeds its largest nodal value
    ratios = np.minimum(values[keep], sup) / sup
    phi = np.concatenate([[0.0], (report.p - 1.0) * np.log(ratios)])
    points = np.vstack([offsets[:1], offsets[1:][keep]])
    bubble = Bubble.limit_profile()(points)
    return ProfileComparison(
        p=report.p,
        lam=report.lam,
        epsilon=eps,
        sample_radii=list(radii),
        sample_points=points,
        phi_values=phi,
        bubble_values=np.asarray(bubble, dtype=float),
        sup_discrepancy=float(np.max(np.abs(phi - bubble))),
        window_resolved=bool(resolved),
        dropped_samples=dropped,
        local_h=local_h,
    )
