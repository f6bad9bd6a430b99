"""
Plain-text mesh format and the on-disk mesh cache.

Format::

    vertices N triangles M
    x y boundary_flag        (N lines)
    i j k                    (M lines, 0-based)
"""
import hashlib
import json
import logging
from pathlib import Path
from typing import Optional, Union

import numpy as np

from ..shared_libraries import constants
from ..shared_libraries.errors import SnapshotFormatError
from .domain import DomainSpec
from .triangulation import Mesh, build_mesh

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def format_mesh(mesh: Mesh) -> str:
    lines = [f"vertices {mesh.n_vertices} triangles {mesh.n_triangles}"]
    for (x, y), flag in zip(mesh.vertices, mesh.boundary_mask):
        lines.append(f"{float(x)!r} {float(y)!r} {int(flag)}")
    for i, j, k in mesh.triangles:
        lines.append(f"{i} {j} {k}")
    return "\n".join(lines) + "\n"


def write_mesh(mesh: Mesh, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_mesh(mesh))
    return path


def read_mesh(path: PathLike, spec: Optional[DomainSpec] = None) -> Mesh:
    """
    Load a mesh file.

    When ``spec`` is given the mesh is attached to it, and flagged symmetric
    if its vertex set is invariant under both reflections.

    Raises:
        SnapshotFormatError: header or body does not match the format
    """
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines:
        raise SnapshotFormatError(f"{path}: empty mesh file")
    header = lines[0].split()
    if len(header) != 4 or header[0] != "vertices" or header[2] != "triangles":
        raise SnapshotFormatError(f"{path}: bad header {lines[0]!r}")
    try:
        n, m = int(header[1]), int(header[3])
    except ValueError as e:
        raise SnapshotFormatError(f"{path}: bad counts in header {lines[0]!r}") from e
    body = lines[1:]
    if len(body) < n + m:
        raise SnapshotFormatError(f"{path}: expected {n + m} body lines, found {len(body)}")
    try:
        vertex_rows = [row.split() for row in body[:n]]
        vertices = np.array([[float(r[0]), float(r[1])] for r in vertex_rows])
        flags = np.array([int(r[2]) != 0 for r in vertex_rows], dtype=bool)
        triangle_rows = [[int(v) for v in row.split()] for row in body[n:n + m]]
        triangles = np.array(triangle_rows, dtype=np.int64)
    except (ValueError, IndexError) as e:
        raise SnapshotFormatError(f"{path}: malformed body line ({e})") from e
    try:
        mesh = Mesh(vertices=vertices.reshape(n, 2), triangles=triangles.reshape(m, 3),
                    boundary_mask=flags, spec=spec)
    except ValueError as e:
        raise SnapshotFormatError(f"{path}: {e}") from e
    if spec is not None and spec.is_symmetric:
        if all(mesh.mirror_permutation(axis) is not None for axis in (0, 1)):
            mesh = Mesh(
                mesh.vertices, mesh.triangles, mesh.boundary_mask, spec=spec, symmetric=True
            )
    return mesh


def cache_key(spec: DomainSpec, target_h: float) -> str:
    payload = json.dumps(
        {"domain": spec.to_dict(), "target_h": repr(float(target_h))}, sort_keys=True
    )
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def cached_build_mesh(
    spec: DomainSpec, target_h: float, cache_dir: Optional[PathLike] = None
) -> Mesh:
    """build_mesh backed by a text-file cache (LEL_CACHE_DIR); no cache when unset."""
    directory = cache_dir or constants.CACHE_DIR
    if not directory:
        return build_mesh(spec, target_h)
    path = Path(directory) / f"mesh-{spec.label()}-{cache_key(spec, target_h)}.txt"
    if path.exists():
        try:
            logger.debug(f"Mesh cache hit: {path}")
            return read_mesh(path, spec)
        except SnapshotFormatError as e:
            logger.warning(f"Ignoring unreadable cached mesh {path}: {e}")
    mesh = build_mesh(spec, target_h)
    write_mesh(mesh, path)
    return mesh
