"""
Field snapshots: header `field vertices=N p=<p> lambda=<λ>` then N nodal values.
"""
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from ..mesh.triangulation import Mesh
from ..shared_libraries.errors import SnapshotFormatError
from .field import Field


def write_snapshot(field: Field, p: float, lam: float, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"field vertices={len(field.values)} p={float(p)!r} lambda={float(lam)!r}"]
    lines.extend(repr(float(v)) for v in field.values)
    path.write_text("\n".join(lines) + "\n")
    return path


def read_snapshot(path: Union[str, Path], mesh: Mesh) -> Tuple[Field, float, float]:
    """Return (field, p, λ); the vertex count must match ``mesh``."""
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines or not lines[0].startswith("field "):
        raise SnapshotFormatError(f"{path}: missing field header")
    try:
        header = dict(item.split("=", 1) for item in lines[0].split()[1:])
        n = int(header["vertices"])
        p = float(header["p"])
        lam = float(header["lambda"])
        values = np.array([float(v) for v in lines[1:n + 1]])
    except (KeyError, ValueError) as e:
        raise SnapshotFormatError(f"{path}: malformed snapshot ({e})") from e
    if len(values) != n:
        raise SnapshotFormatError(f"{path}: header announces {n} values, found {len(values)}")
    if n != mesh.n_vertices:
        raise SnapshotFormatError(f"{path}: {n} values for a mesh with {mesh.n_vertices} vertices")
    try:
        return Field(mesh, values), p, lam
    except ValueError as e:
        raise SnapshotFormatError(f"{path}: {e}") from e
