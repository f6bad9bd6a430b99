"""
Sparse symmetric operators and P1 finite element assembly.
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Optional, Union

import numpy as np
import scipy.sparse as sp

from ..mesh.triangulation import Mesh
from ..shared_libraries.errors import DegenerateElementError

logger = logging.getLogger(__name__)

# Relative area below which a triangle counts as degenerate
DEGENERATE_AREA = 1e-14


@dataclass(frozen=True, eq=False)
class SparseOperator:
    """Symmetric matrix in compressed row storage with sorted column indices."""
    matrix: sp.csr_matrix

    def __post_init__(self):
        matrix = sp.csr_matrix(self.matrix, dtype=float)
        matrix.sum_duplicates()
        matrix.sort_indices()
        if matrix.shape[0] != matrix.shape[1]:
            raise ValueError(f"operator must be square, got {matrix.shape}")
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def diagonal_matrix(cls, values: np.ndarray) -> "SparseOperator":
        return cls(sp.diags(np.asarray(values, dtype=float), format="csr"))

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @property
    def indptr(self) -> np.ndarray:
        return self.matrix.indptr

    @property
    def indices(self) -> np.ndarray:
        return self.matrix.indices

    @property
    def data(self) -> np.ndarray:
        return self.matrix.data

    def __matmul__(self, other):
        return self.matrix @ other

    def diagonal(self) -> np.ndarray:
        return self.matrix.diagonal()

    @property
    def is_diagonal(self) -> bool:
        coo = self.matrix.tocoo()
        return bool(np.all((coo.row == coo.col) | (coo.data == 0)))

    def is_symmetric(self, rtol: float = 1e-14) -> bool:
        diff = abs(self.matrix - self.matrix.T)
        scale = abs(self.matrix).max() if self.matrix.nnz else 0.0
        return diff.nnz == 0 or diff.max() <= rtol * scale

    def restrict(self, index: np.ndarray) -> "SparseOperator":
        """Principal submatrix on ``index`` (Dirichlet elimination)."""
        return SparseOperator(self.matrix[index][:, index])

    def plus(self, other: "SparseOperator", alpha: float = 1.0) -> "SparseOperator":
        """self + alpha·other."""
        return SparseOperator(self.matrix + alpha * other.matrix)

    def add_diagonal(self, values: np.ndarray) -> "SparseOperator":
        return SparseOperator(self.matrix + sp.diags(np.asarray(values, dtype=float)))

    def norm_inf(self) -> float:
        return float(abs(self.matrix).sum(axis=1).max()) if self.matrix.nnz else 0.0

    def dump_coordinates(self, target: Union[str, Path, IO[str]]) -> None:
        """Write nonzeros as `i j value` lines (debug format)."""
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        lines = [f"{coo.row[i]} {coo.col[i]} {float(coo.data[i])!r}" for i in order]
        text = "\n".join(lines) + "\n"
        if isinstance(target, (str, Path)):
            Path(target).write_text(text)
        else:
            target.write(text)


def _element_geometry(mesh: Mesh):
    corners = mesh.vertices[mesh.triangles]
    # opposite[:, i] is the edge facing vertex i
    opposite = np.stack([
        corners[:, 2] - corners[:, 1],
        corners[:, 0] - corners[:, 2],
        corners[:, 1] - corners[:, 0],
    ], axis=1)
    areas = mesh.areas
    longest = np.max(np.sum(opposite ** 2, axis=2), axis=1)
    degenerate = areas < DEGENERATE_AREA * longest
    if degenerate.any():
        index = int(np.flatnonzero(degenerate)[0])
        raise DegenerateElementError(
            f"triangle #{index} {mesh.triangles[index].tolist()} is degenerate "
            f"(area {areas[index]:.3e})",
            triangle_index=index,
        )
    return opposite, areas


def _scatter(mesh: Mesh, local: np.ndarray) -> SparseOperator:
    n = mesh.n_vertices
    rows = np.repeat(mesh.triangles, 3, axis=1).ravel()
    cols = np.tile(mesh.triangles, (1, 3)).ravel()
    matrix = sp.coo_matrix((local.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    return SparseOperator(matrix)


def assemble_stiffness(mesh: Mesh) -> SparseOperator:
    """∫∇φ_i·∇φ_j over all vertices (no boundary elimination)."""
    opposite, areas = _element_geometry(mesh)
    local = np.einsum("tik,tjk->tij", opposite, opposite) / (4.0 * areas[:, None, None])
    return _scatter(mesh, local)


def assemble_mass(mesh: Mesh, lumped: bool = True) -> SparseOperator:
    """P1 mass matrix; lumped gives |T|/3 per corner on the diagonal."""
    _, areas = _element_geometry(mesh)
    if lumped:
        weights = np.zeros(mesh.n_vertices)
        np.add.at(weights, mesh.triangles.ravel(), np.repeat(areas / 3.0, 3))
        return SparseOperator.diagonal_matrix(weights)
    local = (np.ones((3, 3)) + np.eye(3))[None, :, :] * (areas / 12.0)[:, None, None]
    return _scatter(mesh, local)


def lumped_weights(mesh: Mesh, index: Optional[np.ndarray] = None) -> np.ndarray:
    """Diagonal of the lumped mass, optionally restricted to ``index``."""
    weights = assemble_mass(mesh, lumped=True).diagonal()
    return weights if index is None else weights[index]
