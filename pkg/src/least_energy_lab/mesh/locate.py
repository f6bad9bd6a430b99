"""
Point location and P1 interpolation on triangle meshes.
"""
from typing import Tuple

import numpy as np
from scipy.spatial import cKDTree

# Triangles inspected per query before falling back to a full scan
DEFAULT_CANDIDATES = 12


class PointLocator:
    """
    Finds the triangle containing each query point.

    A KD-tree over triangle barycenters proposes candidates; barycentric
    coordinates decide membership. Points missed by the candidates are
    scanned against every triangle, so the answer never depends on k.
    """

    def __init__(
        self, vertices: np.ndarray, triangles: np.ndarray, candidates: int = DEFAULT_CANDIDATES
    ):
        self._triangles = np.asarray(triangles)
        verts = np.asarray(vertices, dtype=float)
        self._origin = verts[self._triangles[:, 0]]
        e1 = verts[self._triangles[:, 1]] - self._origin
        e2 = verts[self._triangles[:, 2]] - self._origin
        det = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
        with np.errstate(divide="ignore", invalid="ignore"):
            self._inverse = np.stack([
                np.stack([e2[:, 1], -e2[:, 0]], axis=-1),
                np.stack([-e1[:, 1], e1[:, 0]], axis=-1),
            ], axis=1) / det[:, None, None]
        barycenters = verts[self._triangles].mean(axis=1)
        self._tree = cKDTree(barycenters)
        self._k = min(candidates, len(self._triangles))

    def _barycentric(self, candidates: np.ndarray, points: np.ndarray) -> np.ndarray:
        rel = points[:, None, :] - self._origin[candidates]
        with np.errstate(invalid="ignore"):
            l12 = np.einsum("qkij,qkj->qki", self._inverse[candidates], rel)
        l0 = 1.0 - l12.sum(axis=-1, keepdims=True)
        return np.concatenate([l0, l12], axis=-1)

    def locate(self, points: np.ndarray, tol: float = 1e-10) -> Tuple[np.ndarray, np.ndarray]:
        """
        Return (triangle index, barycentric coordinates) per point.

        Points outside the mesh get index -1 and NaN coordinates.
        """
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        _, candidates = self._tree.query(pts, k=self._k)
        candidates = np.asarray(candidates).reshape(len(pts), self._k)
        bary = self._barycentric(candidates, pts)
        inside = np.nan_to_num(bary.min(axis=-1), nan=-np.inf) >= -tol
        found = inside.any(axis=1)
        first = inside.argmax(axis=1)
        rows = np.arange(len(pts))
        tri = np.where(found, candidates[rows, first], -1)
        coords = bary[rows, first]
        all_triangles = np.arange(len(self._triangles))
        for q in np.flatnonzero(~found):
            full = self._barycentric(all_triangles[None, :], pts[q:q + 1])[0]
            hits = np.flatnonzero(np.nan_to_num(full.min(axis=-1), nan=-np.inf) >= -tol)
            if hits.size:
                tri[q] = hits[0]
                coords[q] = full[hits[0]]
        coords[tri < 0] = np.nan
        return tri, coords

    def interpolate(self, values: np.ndarray, points: np.ndarray) -> np.ndarray:
        """P1 interpolation of nodal ``values``; NaN outside the mesh."""
        tri, coords = self.locate(points)
        vals = np.asarray(values, dtype=float)
        out = np.full(len(tri), np.nan)
        inside = tri >= 0
        out[inside] = np.sum(vals[self._triangles[tri[inside]]] * coords[inside], axis=1)
        return out
