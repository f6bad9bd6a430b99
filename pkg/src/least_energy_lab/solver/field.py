"""
Nodal P1 fields and the positive initial guesses used by the minimizer.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from ..linalg.operators import assemble_mass, assemble_stiffness
from ..linalg.solvers import smallest_eigenpairs
from ..mesh.triangulation import Mesh
from ..shared_libraries.models import Point


@dataclass(frozen=True, eq=False)
class Field:
    """Nodal values on a mesh, exactly zero on boundary vertices."""
    mesh: Mesh
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.mesh.n_vertices,):
            raise ValueError(
                f"field needs {self.mesh.n_vertices} nodal values, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("field values must be finite")
        if np.any(values[self.mesh.boundary_mask] != 0.0):
            raise ValueError("field must vanish on boundary vertices")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_interior(cls, mesh: Mesh, interior_values: np.ndarray) -> "Field":
        values = np.zeros(mesh.n_vertices)
        values[mesh.interior_indices] = interior_values
        return cls(mesh, values)

    @property
    def interior_values(self) -> np.ndarray:
        return self.values[self.mesh.interior_indices]

    @property
    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    @property
    def argmax(self) -> int:
        """Smallest vertex index attaining the maximum."""
        return int(np.argmax(self.values))

    @property
    def max_point(self) -> Point:
        x, y = self.mesh.vertices[self.argmax]
        return float(x), float(y)

    def scaled(self, factor: float) -> "Field":
        return Field(self.mesh, self.values * factor)

    def is_zero(self) -> bool:
        return not np.any(self.values)

    def gradients(self) -> np.ndarray:
        """Constant gradient of the P1 interpolant on each triangle, shape (M, 2)."""
        return triangle_gradients(self.mesh, self.values)

    def at(self, points: np.ndarray) -> np.ndarray:
        return self.mesh.interpolate(self.values, points)


def triangle_gradients(mesh: Mesh, values: np.ndarray) -> np.ndarray:
    corners = mesh.vertices[mesh.triangles]
    v = np.asarray(values)[mesh.triangles]
    e1 = corners[:, 1] - corners[:, 0]
    e2 = corners[:, 2] - corners[:, 0]
    det = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
    d1 = v[:, 1] - v[:, 0]
    d2 = v[:, 2] - v[:, 0]
    gx = (d1 * e2[:, 1] - d2 * e1[:, 1]) / det
    gy = (d2 * e1[:, 0] - d1 * e2[:, 0]) / det
    return np.column_stack([gx, gy])


def nodal_gradients(mesh: Mesh, values: np.ndarray) -> np.ndarray:
    """Area-weighted average of the surrounding triangle gradients, shape (N, 2)."""
    grads = triangle_gradients(mesh, values)
    weights = mesh.areas
    out = np.zeros((mesh.n_vertices, 2))
    total = np.zeros(mesh.n_vertices)
    for corner in range(3):
        np.add.at(out, mesh.triangles[:, corner], grads * weights[:, None])
        np.add.at(total, mesh.triangles[:, corner], weights)
    return out / total[:, None]


@lru_cache(maxsize=16)
def first_dirichlet_pair(mesh: Mesh) -> Tuple[float, np.ndarray]:
    """λ₁ʰ and its eigenvector for the lumped-mass Dirichlet Laplacian (interior dofs)."""
    interior = mesh.interior_indices
    stiffness = assemble_stiffness(mesh).restrict(interior)
    mass = assemble_mass(mesh, lumped=True).restrict(interior)
    pair = smallest_eigenpairs(stiffness, mass, k=1)[0]
    return pair.value, np.abs(pair.vector)


def first_dirichlet_eigenvalue(mesh: Mesh) -> float:
    return first_dirichlet_pair(mesh)[0]


def first_eigenfunction(mesh: Mesh) -> Field:
    """Positive first Dirichlet eigenfunction, scaled to max 1."""
    _, vector = first_dirichlet_pair(mesh)
    return Field.from_interior(mesh, vector / np.max(vector))


def gaussian_bump(mesh: Mesh, center: Optional[Point] = None, width: float = 0.25) -> Field:
    """exp(-|x-center|²/(2·width²)) on interior vertices, zero on the boundary."""
    if center is None:
        center = mesh.spec.center if mesh.spec is not None else tuple(mesh.vertices.mean(axis=0))
    rel = mesh.vertices - np.asarray(center)
    values = np.exp(-np.sum(rel ** 2, axis=1) / (2.0 * width ** 2))
    values[mesh.boundary_mask] = 0.0
    return Field(mesh, values)


def transfer_field(field: Field, mesh: Mesh) -> Field:
    """P1 interpolation of ``field`` onto the vertices of another mesh of the same domain."""
    if mesh is field.mesh:
        return field
    values = field.at(mesh.vertices)
    values = np.nan_to_num(values, nan=0.0)
    values[mesh.boundary_mask] = 0.0
    return Field(mesh, values)
