"""
Star-shapedness of the superlevel sets about the maximum point:
(x - x_p)·∇u < 0 away from x_p, and h = (x - x_p)·∇u + 2u/(p-1) < 0 on a
ring around the core ball.
"""
import logging
import math
from typing import Optional

import numpy as np

from ..linalg.operators import assemble_mass, assemble_stiffness
from ..linalg.solvers import smallest_eigenpairs
from ..shared_libraries.errors import EigenSolverError, NonConvexDomainError
from ..shared_libraries.models import StarShapeReport, StarViolation
from ..solver.energy import positive_power
from ..solver.field import nodal_gradients
from ..solver.minimize import SolveReport

logger = logging.getLogger(__name__)

DEFAULT_CORE_RADIUS_FACTOR = 1.0
# h is negative on |X| = R only for R > √8 in the limit
DEFAULT_RING_RADIUS_FACTOR = 4.0
RING_SAMPLES = 64
MIN_EXTERIOR_DOFS = 8


def ring_h_values(
    report: SolveReport, ring_radius: float, samples: int = RING_SAMPLES
) -> np.ndarray:
    """h at points of |x - x_p| = ring_radius, from the recovered nodal gradient."""
    mesh = report.mesh
    u = report.solution.values
    center = np.asarray(report.max_point)
    theta = 2.0 * math.pi * np.arange(samples) / samples
    rel = ring_radius * np.column_stack([np.cos(theta), np.sin(theta)])
    points = center + rel
    gradient = nodal_gradients(mesh, u)
    gx = mesh.interpolate(gradient[:, 0], points)
    gy = mesh.interpolate(gradient[:, 1], points)
    values = mesh.interpolate(u, points)
    h = rel[:, 0] * gx + rel[:, 1] * gy + 2.0 * values / (report.p - 1.0)
    return h[np.isfinite(h)]


def exterior_first_eigenvalue(report: SolveReport, radius: float) -> Optional[float]:
    """Smallest eigenvalue of -Δ + λ - p·u^{p-1} on interior vertices outside B(x_p, radius)."""
    mesh = report.mesh
    rel = mesh.vertices - np.asarray(report.max_point)
    outside = np.flatnonzero(~mesh.boundary_mask & (np.hypot(rel[:, 0], rel[:, 1]) > radius))
    if len(outside) < MIN_EXTERIOR_DOFS:
        return None
    u = report.solution.values[outside]
    mass = assemble_mass(mesh, lumped=True).restrict(outside)
    weights = mass.diagonal()
    potential = report.lam - report.p * positive_power(u, report.p - 1.0, report.p)
    operator = assemble_stiffness(mesh).restrict(outside).add_diagonal(weights * potential)
    try:
        return smallest_eigenpairs(operator, mass, k=1)[0].value
    except EigenSolverError as e:
        logger.warning(f"exterior eigenvalue at p={report.p:g} failed: {e}")
        return None


def star_shape_test(
    report: SolveReport,
    core_radius_factor: float = DEFAULT_CORE_RADIUS_FACTOR,
    boundary_width: Optional[float] = None,
    ring_radius_factor: float = DEFAULT_RING_RADIUS_FACTOR,
) -> StarShapeReport:
    """
    Scan (x_T - x_p)·∇u_T at every triangle barycenter outside the core ball
    B(x_p, core_radius_factor·ε) and the boundary strip (default 2·h_max).

    Raises:
        NonConvexDomainError: the mesh does not cover a convex region
    """
    mesh = report.mesh
    if not mesh.is_convex():
        raise NonConvexDomainError("star-shapedness test needs a convex domain")
    width = 2.0 * mesh.h_max if boundary_width is None else boundary_width
    eps = report.epsilon
    core = core_radius_factor * eps
    center = np.asarray(report.max_point)

    barycenters = mesh.barycenters
    rel = barycenters - center
    outside_core = np.hypot(rel[:, 0], rel[:, 1]) > core
    tested = outside_core & (mesh.distance_to_boundary(barycenters) > width)
    radial = np.sum(rel * report.solution.gradients(), axis=1)
    bad = np.flatnonzero(tested & (radial >= 0))
    violations = [
        StarViolation(
            triangle=int(t),
            barycenter=(float(barycenters[t, 0]), float(barycenters[t, 1])),
            value=float(radial[t]),
        )
        for t in bad
    ]

    ring = ring_radius_factor * eps
    h_values = ring_h_values(report, ring)
    h_min, h_max = math.nan, math.nan
    if len(h_values):
        h_min, h_max = float(h_values.min()), float(h_values.max())
    exterior = exterior_first_eigenvalue(report, ring)
    logger.info(
        f"star test p={report.p:g}: {len(violations)} violations of {int(tested.sum())} triangles, "
        f"ring h in [{h_min:.3e}, {h_max:.3e}]"
    )
    return StarShapeReport(
        violations=violations,
        excluded_core_radius=core,
        excluded_boundary_width=width,
        h_ring_min=h_min,
        h_ring_max=h_max,
        triangles_tested=int(tested.sum()),
        exterior_first_eigenvalue=exterior,
    )
