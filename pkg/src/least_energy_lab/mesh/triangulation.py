"""
P1 triangle meshes of convex domains: construction and graded refinement.

Symmetric domains are meshed in the closed first quadrant and reflected
across both axes, so the vertex set commutes exactly with x₁ ↦ -x₁ and
x₂ ↦ -x₂. Meshes are refined by splitting edges longer than a size field
at their midpoints and re-triangulating (Delaunay) until every edge fits.
"""
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional, Tuple

import numpy as np
import shapely
from scipy.integrate import trapezoid
from scipy.spatial import ConvexHull, Delaunay
from shapely.geometry import Polygon

from ..shared_libraries import constants
from ..shared_libraries.errors import DomainError, LabError, MeshSizeError
from ..shared_libraries.models import GradingSpec, Point
from .domain import DomainSpec
from .locate import PointLocator

logger = logging.getLogger(__name__)

# Seed lattice spacing relative to the target size
SEED_FACTOR = 0.9
# Uniform meshes split every edge longer than this multiple of target_h
UNIFORM_SPLIT_FACTOR = 1.5
# Lattice points keep this fraction of the seed spacing away from ∂Ω and the axes
CLEARANCE = 0.45
MAX_SPLIT_ROUNDS = 200
# Digits kept when identifying mirrored vertices
CANONICAL_DIGITS = 12

SizeField = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class Mesh:
    """
    Conforming P1 triangulation with per-vertex boundary flags.

    Arrays are read-only after construction; derived quantities are cached.
    """
    vertices: np.ndarray
    triangles: np.ndarray
    boundary_mask: np.ndarray
    spec: Optional[DomainSpec] = None
    symmetric: bool = False

    def __post_init__(self):
        vertices = np.array(self.vertices, dtype=float)
        triangles = np.array(self.triangles, dtype=np.int64)
        mask = np.array(self.boundary_mask, dtype=bool)
        if vertices.ndim != 2 or vertices.shape[1] != 2:
            raise ValueError(f"vertices must be (N, 2), got {vertices.shape}")
        if triangles.ndim != 2 or triangles.shape[1] != 3:
            raise ValueError(f"triangles must be (M, 3), got {triangles.shape}")
        if mask.shape != (len(vertices),):
            raise ValueError("boundary_mask needs one flag per vertex")
        if not np.all(np.isfinite(vertices)):
            raise ValueError("vertex coordinates must be finite")
        if triangles.size and (triangles.min() < 0 or triangles.max() >= len(vertices)):
            raise ValueError("triangle references a missing vertex")
        signed = _signed_areas(vertices, triangles)
        if np.any(signed < 0):
            bad = int(np.flatnonzero(signed < 0)[0])
            raise ValueError(f"triangle #{bad} is clockwise")
        for array in (vertices, triangles, mask):
            array.setflags(write=False)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "triangles", triangles)
        object.__setattr__(self, "boundary_mask", mask)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    @cached_property
    def areas(self) -> np.ndarray:
        return _signed_areas(self.vertices, self.triangles)

    @property
    def area(self) -> float:
        return float(np.sum(self.areas))

    @property
    def area_deficit(self) -> Optional[float]:
        """Exact |Ω| minus the polygonal area; None without a domain."""
        return None if self.spec is None else self.spec.area - self.area

    @cached_property
    def barycenters(self) -> np.ndarray:
        return self.vertices[self.triangles].mean(axis=1)

    @cached_property
    def _edge_data(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return _unique_edges(self.triangles)

    @property
    def edges(self) -> np.ndarray:
        return self._edge_data[0]

    @property
    def triangle_edges(self) -> np.ndarray:
        """(M, 3) edge indices of each triangle."""
        return self._edge_data[1]

    @cached_property
    def edge_lengths(self) -> np.ndarray:
        diff = self.vertices[self.edges[:, 1]] - self.vertices[self.edges[:, 0]]
        return np.hypot(diff[:, 0], diff[:, 1])

    @property
    def h_max(self) -> float:
        return float(self.edge_lengths.max())

    @property
    def h_min(self) -> float:
        return float(self.edge_lengths.min())

    @property
    def boundary_edges(self) -> np.ndarray:
        return self.edges[self._edge_data[2] == 1]

    @cached_property
    def interior_indices(self) -> np.ndarray:
        return np.flatnonzero(~self.boundary_mask)

    @cached_property
    def min_angle(self) -> float:
        """Smallest interior angle over all triangles, in degrees."""
        corners = self.vertices[self.triangles]
        smallest = math.pi
        for i in range(3):
            a = corners[:, (i + 1) % 3] - corners[:, i]
            b = corners[:, (i + 2) % 3] - corners[:, i]
            cos = np.sum(a * b, axis=1) / (np.hypot(*a.T) * np.hypot(*b.T))
            smallest = min(smallest, float(np.min(np.arccos(np.clip(cos, -1.0, 1.0)))))
        return math.degrees(smallest)

    @cached_property
    def locator(self) -> PointLocator:
        return PointLocator(self.vertices, self.triangles)

    @cached_property
    def hull(self) -> Polygon:
        """shapely polygon of the triangulated region (convex hull of the vertices)."""
        hull = ConvexHull(self.vertices)
        return Polygon(self.vertices[hull.vertices])

    def interpolate(self, values: np.ndarray, points: np.ndarray) -> np.ndarray:
        return self.locator.interpolate(values, points)

    def distance_to_boundary(self, points: np.ndarray) -> np.ndarray:
        """Distance to the domain boundary, or to the hull boundary for meshes without a spec."""
        if self.spec is not None:
            return self.spec.distance_to_boundary(points)
        return shapely.distance(self.hull.exterior, shapely.points(np.asarray(points, dtype=float)))

    def local_h(self, point: Point, radius: float) -> float:
        """Longest edge whose midpoint lies within ``radius`` of ``point``."""
        mids = 0.5 * (self.vertices[self.edges[:, 0]] + self.vertices[self.edges[:, 1]])
        near = np.hypot(mids[:, 0] - point[0], mids[:, 1] - point[1]) <= radius
        if near.any():
            return float(self.edge_lengths[near].max())
        tri, _ = self.locator.locate(np.asarray([point]))
        if tri[0] < 0:
            nearest = int(np.argmin(np.hypot(*(self.vertices - np.asarray(point)).T)))
            touching = np.any(self.edges == nearest, axis=1)
            return float(self.edge_lengths[touching].max())
        return float(self.edge_lengths[self.triangle_edges[tri[0]]].max())

    def is_conforming(self) -> bool:
        """Interior edges shared by two triangles, boundary edges by one with flagged endpoints."""
        counts = self._edge_data[2]
        if np.any(counts > 2):
            return False
        outer = self.edges[counts == 1]
        return bool(np.all(self.boundary_mask[outer]))

    def is_convex(self, rtol: float = 1e-9) -> bool:
        """True when the triangulated region fills its own convex hull."""
        return abs(ConvexHull(self.vertices).volume - self.area) <= rtol * self.area

    def mirror_permutation(self, axis: int) -> Optional[np.ndarray]:
        """
        Vertex permutation realizing the reflection flipping coordinate ``axis``
        about the domain center, or None when the vertex set is not symmetric.
        """
        center = np.asarray(self.spec.center if self.spec is not None else (0.0, 0.0))
        rel = np.round(self.vertices - center, CANONICAL_DIGITS) + 0.0
        lookup = {tuple(row): i for i, row in enumerate(rel)}
        flipped = rel.copy()
        flipped[:, axis] = -flipped[:, axis]
        flipped += 0.0
        perm = np.empty(len(rel), dtype=np.int64)
        for i, row in enumerate(flipped):
            j = lookup.get(tuple(row))
            if j is None:
                return None
            perm[i] = j
        return perm

    @cached_property
    def interior_mirrors(self) -> Tuple[np.ndarray, ...]:
        """Both mirror permutations in interior-dof numbering; empty unless ``symmetric``."""
        if not self.symmetric:
            return ()
        interior = self.interior_indices
        position = np.full(self.n_vertices, -1, dtype=np.int64)
        position[interior] = np.arange(len(interior))
        mirrors = []
        for axis in (0, 1):
            perm = self.mirror_permutation(axis)
            if perm is None:
                return ()
            mirrors.append(position[perm[interior]])
        return tuple(mirrors)

    def summary(self) -> dict:
        return {
            "vertices": self.n_vertices,
            "triangles": self.n_triangles,
            "h_max": self.h_max,
            "h_min": self.h_min,
            "min_angle": self.min_angle,
            "area_deficit": self.area_deficit,
            "symmetric": self.symmetric,
        }


def build_mesh(spec: DomainSpec, target_h: float, max_vertices: Optional[int] = None) -> Mesh:
    """
    Triangulate ``spec`` with edges no longer than 1.5·target_h.

    Args:
        spec: Domain to mesh
        target_h: Nominal edge length, must be below diam(Ω)/4
        max_vertices: Vertex cap (defaults to LEL_MAX_MESH_VERTICES)

    Returns:
        Mesh whose boundary vertices lie on ∂Ω

    Raises:
        ValueError: target_h out of range
        MeshSizeError: the cap would be exceeded
    """
    if not 0 < target_h < spec.diameter / 4:
        raise ValueError(
            f"target_h must be in (0, diam/4 = {spec.diameter / 4:g}), got {target_h}"
        )
    cap = max_vertices or constants.MAX_MESH_VERTICES
    spacing = SEED_FACTOR * target_h
    limit = UNIFORM_SPLIT_FACTOR * target_h

    def size(points: np.ndarray) -> np.ndarray:
        return np.full(len(points), limit)

    if spec.is_symmetric:
        points, flags = _quadrant_seed(spec, spacing)
        points, flags, triangles = _split_long_edges(
            points, flags, size, spec.project_to_boundary, cap, multiplicity=4
        )
        mesh = _reflect_quadrant(spec, points, flags, triangles)
    else:
        points, flags = _polygon_seed(spec, spacing)
        points, flags, triangles = _split_long_edges(points, flags, size, _identity, cap)
        mesh = _assemble_mesh(spec, points, flags, triangles, symmetric=False)

    logger.info(
        f"Built mesh for {spec.label()}: {mesh.n_vertices} vertices, "
        f"{mesh.n_triangles} triangles, h_max={mesh.h_max:.4g}"
    )
    return mesh


def refine(mesh: Mesh, grading: GradingSpec, max_vertices: Optional[int] = None) -> Mesh:
    """
    Split edges until every edge near ``grading.focus`` is no longer than inner_h.

    The size field is inner_h inside B(focus, transition_radius) and grows
    linearly (rate LEL_GRADING_RATE) outside it, capped at outer_h. When no
    edge needs splitting the input mesh is returned as is. A symmetric mesh
    refined about its center stays symmetric.

    Raises:
        DomainError: focus outside the mesh
        MeshSizeError: the estimated or actual vertex count exceeds the cap
    """
    cap = max_vertices or constants.MAX_MESH_VERTICES
    focus = np.asarray(grading.focus, dtype=float)
    if mesh.locator.locate(focus[None, :])[0][0] < 0:
        raise DomainError(f"grading focus {grading.focus} lies outside the mesh")

    extent = float(np.max(np.hypot(*(mesh.vertices - focus).T)))
    estimate = mesh.n_vertices + _estimate_vertices(grading, extent)
    if estimate > cap:
        raise MeshSizeError(
            f"refinement to inner_h={grading.inner_h:g} needs about {estimate} vertices, "
            f"above the cap of {cap} (LEL_MAX_MESH_VERTICES)",
            cap=cap,
            estimate=estimate,
        )

    spec = mesh.spec
    center = np.asarray(spec.center) if spec is not None else None
    about_center = (
        mesh.symmetric and spec is not None and spec.is_symmetric
        and np.allclose(focus, center, rtol=0.0, atol=1e-12 * spec.diameter)
    )

    if about_center:
        points, flags = _quadrant_of(mesh)
        size = _size_field(grading, origin=center)
        new_points, new_flags, triangles = _split_long_edges(
            points, flags, size, spec.project_to_boundary, cap, multiplicity=4
        )
        if len(new_points) == len(points):
            return mesh
        refined = _reflect_quadrant(spec, new_points, new_flags, triangles)
    else:
        to_boundary = _identity
        if spec is not None:
            def to_boundary(pts: np.ndarray) -> np.ndarray:
                return spec.project_to_boundary(pts - center) + center
        size = _size_field(grading, origin=np.zeros(2))
        new_points, new_flags, triangles = _split_long_edges(
            np.array(mesh.vertices), np.array(mesh.boundary_mask), size, to_boundary, cap
        )
        if len(new_points) == mesh.n_vertices:
            return mesh
        refined = _assemble_mesh(spec, new_points, new_flags, triangles, symmetric=False)

    logger.info(
        f"Refined mesh about {grading.focus}: {mesh.n_vertices} -> {refined.n_vertices} vertices, "
        f"inner_h={grading.inner_h:.3g}"
    )
    return refined


def grading_for(
    focus: Point,
    epsilon: float,
    outer_h: float,
    cells_per_scale: float = 4.0,
    core_scales: float = 6.0,
) -> GradingSpec:
    """GradingSpec resolving a concentration scale ``epsilon`` around ``focus``."""
    inner_h = min(outer_h, epsilon / cells_per_scale)
    return GradingSpec(
        focus=focus,
        inner_h=inner_h,
        outer_h=outer_h,
        transition_radius=max(core_scales * epsilon, inner_h),
    )


# ----------------------------------------------------------------------
# Construction helpers
# ----------------------------------------------------------------------

def _identity(points: np.ndarray) -> np.ndarray:
    return points


def _signed_areas(vertices: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    p0 = vertices[triangles[:, 0]]
    e1 = vertices[triangles[:, 1]] - p0
    e2 = vertices[triangles[:, 2]] - p0
    return 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])


def _unique_edges(triangles: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    m = len(triangles)
    local = np.vstack([triangles[:, [0, 1]], triangles[:, [1, 2]], triangles[:, [2, 0]]])
    local = np.sort(local, axis=1)
    edges, inverse, counts = np.unique(local, axis=0, return_inverse=True, return_counts=True)
    triangle_edges = inverse.reshape(-1).reshape(3, m).T
    return edges, triangle_edges, counts


def _lattice(
    x_range: Tuple[float, float], y_range: Tuple[float, float], spacing: float
) -> np.ndarray:
    """Triangular lattice with the given spacing covering a box."""
    row_step = spacing * math.sqrt(3.0) / 2.0
    rows = []
    j = 0
    y = y_range[0]
    while y <= y_range[1]:
        offset = 0.5 * spacing if j % 2 else 0.0
        xs = np.arange(x_range[0] + offset, x_range[1] + 1e-12, spacing)
        rows.append(np.column_stack([xs, np.full(len(xs), y)]))
        j += 1
        y = y_range[0] + j * row_step
    return np.vstack(rows) if rows else np.empty((0, 2))


def _quadrant_seed(spec: DomainSpec, spacing: float) -> Tuple[np.ndarray, np.ndarray]:
    """Seed points of the closed first quadrant, relative to the center."""
    a, b = spec.half_extents
    boundary = spec.quadrant_boundary(spacing)
    nx = max(1, math.ceil(a / spacing))
    ny = max(1, math.ceil(b / spacing))
    x_axis = np.column_stack([np.linspace(0.0, a, nx + 1)[:-1], np.zeros(nx)])
    y_axis = np.column_stack([np.zeros(ny - 1), np.linspace(0.0, b, ny + 1)[1:-1]])

    clearance = CLEARANCE * spacing
    lattice = _lattice((0.0, a), (spacing * math.sqrt(3.0) / 2.0, b), spacing)
    keep = (lattice[:, 0] >= clearance) & (lattice[:, 1] >= clearance)
    lattice = lattice[keep]
    center = np.asarray(spec.center)
    absolute = lattice + center
    keep = spec.contains(absolute) & (spec.distance_to_boundary(absolute) >= clearance)
    lattice = lattice[keep]

    points = np.vstack([boundary, x_axis, y_axis, lattice])
    flags = np.concatenate([
        np.ones(len(boundary), dtype=bool),
        np.zeros(len(x_axis) + len(y_axis) + len(lattice), dtype=bool),
    ])
    return points, flags


def _polygon_seed(spec: DomainSpec, spacing: float) -> Tuple[np.ndarray, np.ndarray]:
    boundary = spec.polygon_boundary(spacing)
    verts = np.asarray(spec.vertices)
    lattice = _lattice(
        (verts[:, 0].min(), verts[:, 0].max()), (verts[:, 1].min(), verts[:, 1].max()), spacing
    )
    keep = spec.contains(lattice) & (spec.distance_to_boundary(lattice) >= CLEARANCE * spacing)
    lattice = lattice[keep]
    points = np.vstack([boundary, lattice])
    flags = np.concatenate([np.ones(len(boundary), dtype=bool), np.zeros(len(lattice), dtype=bool)])
    return points, flags


def _delaunay(points: np.ndarray) -> np.ndarray:
    triangulation = Delaunay(points)
    if len(triangulation.coplanar):
        dropped = len(triangulation.coplanar)
        raise LabError(f"{dropped} seed points were dropped by the triangulation")
    return triangulation.simplices.astype(np.int64)


def _split_long_edges(
    points: np.ndarray,
    flags: np.ndarray,
    size: SizeField,
    to_boundary: Callable[[np.ndarray], np.ndarray],
    cap: int,
    multiplicity: int = 1,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Insert midpoints of over-long edges until every edge fits ``size``."""
    points = np.asarray(points, dtype=float)
    flags = np.asarray(flags, dtype=bool)
    for _ in range(MAX_SPLIT_ROUNDS):
        if multiplicity * len(points) > cap:
            raise MeshSizeError(
                f"mesh reached {multiplicity * len(points)} vertices, above the cap of {cap} "
                f"(LEL_MAX_MESH_VERTICES)",
                cap=cap,
                estimate=multiplicity * len(points),
            )
        triangles = _delaunay(points)
        edges, _, counts = _unique_edges(triangles)
        start = points[edges[:, 0]]
        end = points[edges[:, 1]]
        mids = 0.5 * (start + end)
        lengths = np.hypot(*(end - start).T)
        long = lengths > size(mids) * (1.0 + 1e-12)
        if not long.any():
            return points, flags, triangles
        on_boundary = (counts == 1) & flags[edges[:, 0]] & flags[edges[:, 1]]
        new_points = mids[long]
        new_flags = on_boundary[long]
        if new_flags.any():
            new_points[new_flags] = to_boundary(new_points[new_flags])
        points = np.vstack([points, new_points])
        flags = np.concatenate([flags, new_flags])
    raise LabError(f"edge splitting did not settle after {MAX_SPLIT_ROUNDS} rounds")


def _orient(points: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    triangles = triangles.copy()
    clockwise = _signed_areas(points, triangles) < 0
    triangles[clockwise] = triangles[clockwise][:, [0, 2, 1]]
    return triangles


def _assemble_mesh(
    spec: Optional[DomainSpec],
    points: np.ndarray,
    flags: np.ndarray,
    triangles: np.ndarray,
    symmetric: bool,
) -> Mesh:
    return Mesh(
        vertices=points,
        triangles=_orient(points, triangles),
        boundary_mask=flags,
        spec=spec,
        symmetric=symmetric,
    )


def _reflect_quadrant(
    spec: DomainSpec, points: np.ndarray, flags: np.ndarray, triangles: np.ndarray
) -> Mesh:
    """Mirror a first-quadrant triangulation into all four quadrants and merge shared vertices."""
    triangles = _orient(points, triangles)
    all_points, all_flags, all_triangles = [], [], []
    offset = 0
    for sx, sy in ((1.0, 1.0), (-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)):
        all_points.append(points * np.array([sx, sy]) + 0.0)
        all_flags.append(flags)
        tris = triangles if sx * sy > 0 else triangles[:, [0, 2, 1]]
        all_triangles.append(tris + offset)
        offset += len(points)
    stacked = np.vstack(all_points)
    keys = np.round(stacked, CANONICAL_DIGITS) + 0.0
    _, first, inverse = np.unique(keys, axis=0, return_index=True, return_inverse=True)
    inverse = inverse.reshape(-1)
    merged_flags = np.zeros(len(first), dtype=bool)
    np.logical_or.at(merged_flags, inverse, np.concatenate(all_flags))
    vertices = stacked[first] + np.asarray(spec.center)
    return Mesh(
        vertices=vertices,
        triangles=inverse[np.vstack(all_triangles)],
        boundary_mask=merged_flags,
        spec=spec,
        symmetric=True,
    )


def _quadrant_of(mesh: Mesh) -> Tuple[np.ndarray, np.ndarray]:
    """Vertices of a symmetric mesh in the closed first quadrant, relative to the center."""
    rel = mesh.vertices - np.asarray(mesh.spec.center)
    rel[np.abs(rel) < 1e-12 * mesh.spec.diameter] = 0.0
    keep = (rel[:, 0] >= 0.0) & (rel[:, 1] >= 0.0)
    return rel[keep], np.array(mesh.boundary_mask[keep])


def _size_field(grading: GradingSpec, origin: np.ndarray) -> SizeField:
    focus = np.asarray(grading.focus) - origin

    def size(points: np.ndarray) -> np.ndarray:
        distance = np.hypot(points[:, 0] - focus[0], points[:, 1] - focus[1])
        return _grading_profile(distance, grading)

    return size


def _grading_profile(distance: np.ndarray, grading: GradingSpec) -> np.ndarray:
    outside = np.maximum(distance - grading.transition_radius, 0.0)
    return np.minimum(grading.outer_h, grading.inner_h + constants.GRADING_RATE * outside)


def _estimate_vertices(grading: GradingSpec, extent: float) -> int:
    """Vertex count of a graded lattice over the disk B(focus, extent)."""
    radii = np.linspace(0.0, extent, 4001)
    h = _grading_profile(radii, grading)
    density = 2.0 * math.pi * radii / (math.sqrt(3.0) / 2.0 * h ** 2)
    return int(trapezoid(density, radii))
