"""Domains, P1 triangulations, graded refinement and mesh files."""
from .domain import DomainKind, DomainSpec
from .io import cached_build_mesh, read_mesh, write_mesh
from .locate import PointLocator
from .triangulation import Mesh, build_mesh, grading_for, refine

__all__ = [
    "DomainKind",
    "DomainSpec",
    "Mesh",
    "PointLocator",
    "build_mesh",
    "cached_build_mesh",
    "grading_for",
    "read_mesh",
    "refine",
    "write_mesh",
]
