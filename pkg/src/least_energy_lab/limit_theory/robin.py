"""
Robin function R(y) = g(y, y) of the Dirichlet Green's function, where
g(·, y) = G(·, y) + (1/2π) log|· - y| is harmonic in Ω with boundary values
(1/2π) log|x - y|. With this sign R tends to -∞ at ∂Ω, so on convex
domains its critical point is an interior maximum.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from ..linalg.operators import assemble_stiffness
from ..linalg.solvers import factorize
from ..mesh.triangulation import Mesh
from ..shared_libraries.errors import RobinSampleError
from ..shared_libraries.models import Point

logger = logging.getLogger(__name__)

# Samples used in the local quadratic fit around the best sample
FIT_NEIGHBOURS = 12


@dataclass
class RobinField:
    mesh: Mesh
    samples: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    critical_point: Point
    critical_value: float
    gradient_residual: float
    polished: bool

    def __post_init__(self):
        if not np.all(np.isfinite(self.values)):
            raise ValueError("Robin values must be finite at every sample")

    def rows(self) -> List[Dict[str, Any]]:
        return [
            {"x": float(x), "y": float(y), "robin": float(value)}
            for (x, y), value in zip(self.samples, self.values)
        ]


def robin_sample_grid(mesh: Mesh, spacing: float, margin: Optional[float] = None) -> np.ndarray:
    """
    Square grid of samples about the domain center (symmetric under both
    reflections), keeping points farther than ``margin`` (default 2·h_max,
    padded) from the boundary.
    """
    margin = 2.05 * mesh.h_max if margin is None else margin
    center = np.asarray(mesh.spec.center) if mesh.spec is not None else mesh.vertices.mean(axis=0)
    half = np.max(np.abs(mesh.vertices - center), axis=0)
    nx = int(half[0] // spacing)
    ny = int(half[1] // spacing)
    xs = np.arange(-nx, nx + 1) * spacing
    ys = np.arange(-ny, ny + 1) * spacing
    grid = np.array([(x, y) for x in xs for y in ys]) + center
    keep = mesh.distance_to_boundary(grid) > margin
    inside = mesh.locator.locate(grid)[0] >= 0
    return grid[keep & inside]


def robin_function(
    mesh: Mesh, samples: np.ndarray, min_distance: Optional[float] = None
) -> RobinField:
    """
    Evaluate the discrete Robin function at each sample and locate its critical point.

    Each sample y needs one discrete Laplace solve with boundary data
    (1/2π) log|x - y|; all solves share one factorization. The best sample
    is polished by a least-squares quadratic fit over its neighbours.

    Raises:
        RobinSampleError: a sample lies within 2·h_max of the boundary
    """
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    limit = 2.0 * mesh.h_max if min_distance is None else min_distance
    distances = mesh.distance_to_boundary(samples)
    inside = mesh.locator.locate(samples)[0] >= 0
    for point, distance, ok in zip(samples, distances, inside):
        if not ok or distance <= limit:
            raise RobinSampleError(
                f"sample {tuple(point)} is {distance:.3e} from the boundary "
                f"(needs more than {limit:.3e})",
                distance=float(distance),
            )

    interior = mesh.interior_indices
    boundary = np.flatnonzero(mesh.boundary_mask)
    stiffness = assemble_stiffness(mesh)
    coupling = stiffness.matrix[interior][:, boundary]
    lu = factorize(stiffness.restrict(interior))

    values = np.empty(len(samples))
    for index, y in enumerate(samples):
        rel = mesh.vertices[boundary] - y
        boundary_values = np.log(np.hypot(rel[:, 0], rel[:, 1])) / (2.0 * math.pi)
        g = np.zeros(mesh.n_vertices)
        g[boundary] = boundary_values
        g[interior] = lu.solve(-(coupling @ boundary_values))
        values[index] = mesh.interpolate(g, y[None, :])[0]

    critical, critical_value, gradient, polished = _polish_maximum(samples, values)
    logger.info(
        f"Robin function on {len(samples)} samples: critical point {critical}, "
        f"value {critical_value:.6g}"
    )
    return RobinField(
        mesh=mesh,
        samples=samples,
        values=values,
        critical_point=critical,
        critical_value=critical_value,
        gradient_residual=gradient,
        polished=polished,
    )


def _polish_maximum(samples: np.ndarray, values: np.ndarray):
    best = int(np.argmax(values))
    best_point = samples[best]
    fallback = ((float(best_point[0]), float(best_point[1])), float(values[best]), math.nan, False)
    if len(samples) < 6:
        return fallback
    order = np.argsort(np.hypot(*(samples - best_point).T), kind="stable")[:FIT_NEIGHBOURS]
    local = samples[order] - best_point
    x, y = local[:, 0], local[:, 1]
    design = np.column_stack([np.ones_like(x), x, y, x * x, x * y, y * y])
    coeffs, _, rank, _ = np.linalg.lstsq(design, values[order], rcond=None)
    if rank < 6:
        return fallback
    c, bx, by, qxx, qxy, qyy = coeffs
    hessian = np.array([[2.0 * qxx, qxy], [qxy, 2.0 * qyy]])
    if np.any(np.linalg.eigvalsh(hessian) >= 0):
        return fallback
    shift = np.linalg.solve(hessian, -np.array([bx, by]))
    reach = np.max(np.hypot(x, y))
    if np.hypot(*shift) > reach:
        return fallback
    point = best_point + shift
    sx, sy = shift
    value = c + bx * sx + by * sy + qxx * sx ** 2 + qxy * sx * sy + qyy * sy ** 2
    gradient_at_best = float(np.hypot(bx, by))
    return (float(point[0]), float(point[1])), float(value), gradient_at_best, True
