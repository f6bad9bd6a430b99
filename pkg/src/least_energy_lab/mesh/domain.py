"""
Admissible domains: disks, ellipses, rectangles and strictly convex polygons.

Geometry queries on polygons and ellipses go through shapely; disks and
rectangles use closed forms so boundary tests stay exact.
"""
import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
import shapely
from shapely.geometry import Polygon

from ..shared_libraries.errors import DomainError, NonConvexDomainError
from ..shared_libraries.models import Point

# Resolution of the shapely polygon standing in for an ellipse
ELLIPSE_RESOLUTION = 4096


class DomainKind(Enum):
    """Supported domain shapes."""
    DISK = "disk"
    ELLIPSE = "ellipse"
    RECTANGLE = "rectangle"
    CONVEX_POLYGON = "convex_polygon"


@dataclass(frozen=True, eq=False)
class DomainSpec:
    """
    A bounded convex domain Ω ⊂ ℝ².

    Use the factories (disk, ellipse, rectangle, convex_polygon) rather than
    the constructor. Disks, ellipses and rectangles are symmetric about both
    axes through ``center``.
    """
    kind: DomainKind
    center: Point = (0.0, 0.0)
    radius: Optional[float] = None
    semi_axes: Optional[Tuple[float, float]] = None
    size: Optional[Tuple[float, float]] = None
    vertices: Optional[Tuple[Point, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        if self.kind is DomainKind.DISK:
            if self.radius is None or not self.radius > 0:
                raise DomainError(f"disk radius must be > 0, got {self.radius}")
        elif self.kind is DomainKind.ELLIPSE:
            if self.semi_axes is None or min(self.semi_axes) <= 0:
                raise DomainError(f"ellipse semi-axes must be > 0, got {self.semi_axes}")
        elif self.kind is DomainKind.RECTANGLE:
            if self.size is None or min(self.size) <= 0:
                raise DomainError(f"rectangle sides must be > 0, got {self.size}")
        else:
            if self.vertices is None or len(self.vertices) < 3:
                raise DomainError("a convex polygon needs at least 3 vertices")
            _check_strictly_convex(np.asarray(self.vertices, dtype=float))

    # ------------------------------------------------------------------
    # Factories
    # ------------------------------------------------------------------

    @classmethod
    def disk(cls, radius: float, center: Point = (0.0, 0.0)) -> "DomainSpec":
        return cls(DomainKind.DISK, center=center, radius=float(radius))

    @classmethod
    def ellipse(cls, a: float, b: float, center: Point = (0.0, 0.0)) -> "DomainSpec":
        return cls(DomainKind.ELLIPSE, center=center, semi_axes=(float(a), float(b)))

    @classmethod
    def rectangle(cls, width: float, height: float, center: Point = (0.0, 0.0)) -> "DomainSpec":
        return cls(DomainKind.RECTANGLE, center=center, size=(float(width), float(height)))

    @classmethod
    def unit_square(cls) -> "DomainSpec":
        """[0, 1]²."""
        return cls.rectangle(1.0, 1.0, center=(0.5, 0.5))

    @classmethod
    def convex_polygon(cls, vertices: Sequence[Point]) -> "DomainSpec":
        pts = tuple((float(x), float(y)) for x, y in vertices)
        arr = np.asarray(pts)
        if arr.shape[0] >= 3:
            _check_strictly_convex(arr)
        centroid = Polygon(pts).centroid if arr.shape[0] >= 3 else None
        center = (centroid.x, centroid.y) if centroid is not None else (0.0, 0.0)
        return cls(DomainKind.CONVEX_POLYGON, center=center, vertices=pts)

    # ------------------------------------------------------------------
    # Serialization
    # ------------------------------------------------------------------

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind.value, "center": list(self.center)}
        if self.kind is DomainKind.DISK:
            data["radius"] = self.radius
        elif self.kind is DomainKind.ELLIPSE:
            data["a"], data["b"] = self.semi_axes
        elif self.kind is DomainKind.RECTANGLE:
            data["width"], data["height"] = self.size
        else:
            data["vertices"] = [list(v) for v in self.vertices]
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DomainSpec":
        kind = DomainKind(data["kind"])
        center = tuple(data.get("center", (0.0, 0.0)))
        if kind is DomainKind.DISK:
            return cls.disk(data["radius"], center)
        if kind is DomainKind.ELLIPSE:
            return cls.ellipse(data["a"], data["b"], center)
        if kind is DomainKind.RECTANGLE:
            return cls.rectangle(data["width"], data["height"], center)
        return cls.convex_polygon(data["vertices"])

    def label(self) -> str:
        if self.kind is DomainKind.DISK:
            return f"disk_r{self.radius:g}"
        if self.kind is DomainKind.ELLIPSE:
            return f"ellipse_{self.semi_axes[0]:g}x{self.semi_axes[1]:g}"
        if self.kind is DomainKind.RECTANGLE:
            return f"rectangle_{self.size[0]:g}x{self.size[1]:g}"
        return f"polygon_{len(self.vertices)}"

    # ------------------------------------------------------------------
    # Geometry
    # ------------------------------------------------------------------

    @property
    def is_symmetric(self) -> bool:
        """True when Ω is symmetric under x₁ ↦ -x₁ and x₂ ↦ -x₂ about its center."""
        return self.kind is not DomainKind.CONVEX_POLYGON

    @property
    def half_extents(self) -> Tuple[float, float]:
        if self.kind is DomainKind.DISK:
            return self.radius, self.radius
        if self.kind is DomainKind.ELLIPSE:
            return self.semi_axes
        if self.kind is DomainKind.RECTANGLE:
            return self.size[0] / 2.0, self.size[1] / 2.0
        arr = np.asarray(self.vertices) - np.asarray(self.center)
        return float(np.max(np.abs(arr[:, 0]))), float(np.max(np.abs(arr[:, 1])))

    @property
    def area(self) -> float:
        if self.kind is DomainKind.DISK:
            return math.pi * self.radius ** 2
        if self.kind is DomainKind.ELLIPSE:
            return math.pi * self.semi_axes[0] * self.semi_axes[1]
        if self.kind is DomainKind.RECTANGLE:
            return self.size[0] * self.size[1]
        return float(Polygon(self.vertices).area)

    @property
    def diameter(self) -> float:
        if self.kind is DomainKind.DISK:
            return 2.0 * self.radius
        if self.kind is DomainKind.ELLIPSE:
            return 2.0 * max(self.semi_axes)
        if self.kind is DomainKind.RECTANGLE:
            return math.hypot(*self.size)
        arr = np.asarray(self.vertices)
        diffs = arr[:, None, :] - arr[None, :, :]
        return float(np.max(np.hypot(diffs[..., 0], diffs[..., 1])))

    @cached_property
    def geometry(self) -> Polygon:
        """shapely polygon of Ω (ellipses and disks polygonized finely)."""
        if self.kind is DomainKind.CONVEX_POLYGON:
            return Polygon(self.vertices)
        if self.kind is DomainKind.RECTANGLE:
            a, b = self.half_extents
            cx, cy = self.center
            return Polygon([(cx - a, cy - b), (cx + a, cy - b), (cx + a, cy + b), (cx - a, cy + b)])
        a, b = self.half_extents
        theta = np.linspace(0.0, 2.0 * math.pi, ELLIPSE_RESOLUTION, endpoint=False)
        return Polygon(np.column_stack([
            self.center[0] + a * np.cos(theta), self.center[1] + b * np.sin(theta)
        ]))

    def contains(self, points: np.ndarray, tol: float = 0.0) -> np.ndarray:
        """Closed-domain membership for an (n, 2) array, with slack ``tol``."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        rel = pts - np.asarray(self.center)
        if self.kind is DomainKind.DISK:
            return np.hypot(rel[:, 0], rel[:, 1]) <= self.radius + tol
        if self.kind is DomainKind.ELLIPSE:
            a, b = self.semi_axes
            return (rel[:, 0] / a) ** 2 + (rel[:, 1] / b) ** 2 <= (1.0 + tol / min(a, b)) ** 2
        if self.kind is DomainKind.RECTANGLE:
            a, b = self.half_extents
            return (np.abs(rel[:, 0]) <= a + tol) & (np.abs(rel[:, 1]) <= b + tol)
        return _polygon_margin(np.asarray(self.vertices), pts) >= -tol

    def distance_to_boundary(self, points: np.ndarray) -> np.ndarray:
        """Unsigned distance from each point to ∂Ω."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        rel = pts - np.asarray(self.center)
        if self.kind is DomainKind.DISK:
            return np.abs(self.radius - np.hypot(rel[:, 0], rel[:, 1]))
        if self.kind is DomainKind.RECTANGLE:
            a, b = self.half_extents
            inside = self.contains(pts)
            gap = np.minimum(a - np.abs(rel[:, 0]), b - np.abs(rel[:, 1]))
            outside = shapely.distance(self.geometry.exterior, shapely.points(pts))
            return np.where(inside, gap, outside)
        return shapely.distance(self.geometry.exterior, shapely.points(pts))

    def project_to_boundary(self, rel_points: np.ndarray) -> np.ndarray:
        """
        Push points given relative to the center onto ∂Ω along rays from the center.

        Straight-sided domains are returned unchanged: midpoints of boundary
        edges already lie on ∂Ω.
        """
        rel = np.atleast_2d(np.asarray(rel_points, dtype=float))
        if self.kind is DomainKind.DISK:
            norms = np.hypot(rel[:, 0], rel[:, 1])
            return rel * (self.radius / norms)[:, None]
        if self.kind is DomainKind.ELLIPSE:
            a, b = self.semi_axes
            scale = 1.0 / np.sqrt((rel[:, 0] / a) ** 2 + (rel[:, 1] / b) ** 2)
            return rel * scale[:, None]
        return rel

    # ------------------------------------------------------------------
    # Boundary sampling
    # ------------------------------------------------------------------

    def quadrant_boundary(self, spacing: float) -> np.ndarray:
        """
        Points of ∂Ω in the closed first quadrant (relative to the center),
        ordered from (a, 0) to (0, b), consecutive distance ≤ spacing.
        """
        a, b = self.half_extents
        if self.kind is DomainKind.RECTANGLE:
            right = np.column_stack([np.full(_count(b, spacing) + 1, a),
                                     np.linspace(0.0, b, _count(b, spacing) + 1)])
            top = np.column_stack([np.linspace(a, 0.0, _count(a, spacing) + 1),
                                   np.full(_count(a, spacing) + 1, b)])
            return np.vstack([right, top[1:]])
        if self.kind is DomainKind.CONVEX_POLYGON:
            raise DomainError("quadrant sampling needs a symmetric domain")
        theta = _equal_arc_angles(a, b, spacing)
        pts = np.column_stack([a * np.cos(theta), b * np.sin(theta)])
        pts[0] = (a, 0.0)
        pts[-1] = (0.0, b)
        return pts

    def polygon_boundary(self, spacing: float) -> np.ndarray:
        """Closed-loop samples of a polygon boundary (vertices included), absolute coordinates."""
        verts = np.asarray(self.vertices, dtype=float)
        chunks = []
        for start, end in zip(verts, np.roll(verts, -1, axis=0)):
            n = _count(float(np.hypot(*(end - start))), spacing)
            t = np.linspace(0.0, 1.0, n + 1)[:-1]
            chunks.append(start + t[:, None] * (end - start))
        return np.vstack(chunks)


def _count(length: float, spacing: float) -> int:
    return max(1, int(math.ceil(length / spacing - 1e-12)))


def _equal_arc_angles(a: float, b: float, spacing: float) -> np.ndarray:
    """Parameter angles in [0, π/2] splitting the ellipse quarter-arc into equal lengths."""
    fine = np.linspace(0.0, math.pi / 2.0, 4001)
    xy = np.column_stack([a * np.cos(fine), b * np.sin(fine)])
    seg = np.hypot(*np.diff(xy, axis=0).T)
    cumulative = np.concatenate([[0.0], np.cumsum(seg)])
    n = _count(cumulative[-1], spacing)
    targets = np.linspace(0.0, cumulative[-1], n + 1)
    return np.interp(targets, cumulative, fine)


def _polygon_margin(vertices: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Signed distance-like margin to the nearest edge line (positive inside a CCW polygon)."""
    start = vertices
    end = np.roll(vertices, -1, axis=0)
    edge = end - start
    length = np.hypot(edge[:, 0], edge[:, 1])
    rel = points[:, None, :] - start[None, :, :]
    cross = edge[None, :, 0] * rel[..., 1] - edge[None, :, 1] * rel[..., 0]
    return np.min(cross / length[None, :], axis=1)


def _check_strictly_convex(vertices: np.ndarray) -> None:
    prev = np.roll(vertices, 1, axis=0)
    nxt = np.roll(vertices, -1, axis=0)
    e1 = vertices - prev
    e2 = nxt - vertices
    cross = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
    scale = np.hypot(e1[:, 0], e1[:, 1]) * np.hypot(e2[:, 0], e2[:, 1])
    signed_area = 0.5 * np.sum(prev[:, 0] * vertices[:, 1] - vertices[:, 0] * prev[:, 1])
    if signed_area <= 0:
        raise NonConvexDomainError("polygon vertices must run counterclockwise")
    for index, (value, norm) in enumerate(zip(cross, scale)):
        if value <= 1e-12 * norm:
            vertex = tuple(float(c) for c in vertices[index])
            raise NonConvexDomainError(
                f"polygon is not strictly convex: reflex or flat vertex #{index} at {vertex}",
                vertex_index=index,
                vertex=vertex,
            )
