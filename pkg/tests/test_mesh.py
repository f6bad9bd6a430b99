"""
Tests for domains, triangulation, refinement and mesh files.

Run with: pytest tests/test_mesh.py
"""
import math

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from least_energy_lab.mesh import (
    DomainKind,
    DomainSpec,
    Mesh,
    build_mesh,
    cached_build_mesh,
    grading_for,
    read_mesh,
    refine,
    write_mesh,
)
from least_energy_lab.shared_libraries.errors import (
    DomainError,
    MeshSizeError,
    NonConvexDomainError,
    SnapshotFormatError,
)
from least_energy_lab.shared_libraries.models import GradingSpec


# ============================================================================
# Domains
# ============================================================================

def test_domain_factories_validate_sizes():
    """Nonpositive sizes are rejected."""
    with pytest.raises(DomainError):
        DomainSpec.disk(0.0)
    with pytest.raises(DomainError):
        DomainSpec.ellipse(1.0, -1.0)
    with pytest.raises(DomainError):
        DomainSpec.rectangle(0.0, 1.0)


def test_reflex_polygon_names_the_vertex():
    """A reflex vertex is reported with its index."""
    with pytest.raises(NonConvexDomainError) as excinfo:
        DomainSpec.convex_polygon([(0, 0), (2, 0), (1, 0.5), (2, 2), (0, 2)])
    assert excinfo.value.vertex_index == 2


def test_clockwise_polygon_rejected():
    """Vertices must run counterclockwise."""
    with pytest.raises(NonConvexDomainError):
        DomainSpec.convex_polygon([(0, 0), (0, 1), (1, 1), (1, 0)])


def test_domain_dict_form():
    """to_dict/from_dict agree for every kind."""
    specs = [
        DomainSpec.disk(2.0, center=(1.0, -1.0)),
        DomainSpec.ellipse(1.5, 1.0),
        DomainSpec.unit_square(),
        DomainSpec.convex_polygon([(0, 0), (1, 0), (0.5, 1)]),
    ]
    for spec in specs:
        again = DomainSpec.from_dict(spec.to_dict())
        assert again.to_dict() == spec.to_dict()
        assert again.label() == spec.label()


def test_symmetry_and_geometry():
    """Closed forms for area and diameter."""
    disk = DomainSpec.disk(2.0)
    assert disk.is_symmetric
    assert disk.area == pytest.approx(4.0 * math.pi)
    assert disk.diameter == 4.0
    square = DomainSpec.unit_square()
    assert square.center == (0.5, 0.5)
    assert square.diameter == pytest.approx(math.sqrt(2.0))
    triangle = DomainSpec.convex_polygon([(0, 0), (1, 0), (0, 1)])
    assert triangle.kind is DomainKind.CONVEX_POLYGON
    assert not triangle.is_symmetric
    assert triangle.area == pytest.approx(0.5)


@given(st.floats(min_value=0.0, max_value=0.99), st.floats(min_value=0.0, max_value=2 * math.pi))
@settings(
    max_examples=50, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture]
)
def test_disk_distance_to_boundary(r, theta):
    """dist(x, ∂B₁) = 1 - |x| inside the unit disk."""
    point = np.array([[r * math.cos(theta), r * math.sin(theta)]])
    distance = DomainSpec.disk(1.0).distance_to_boundary(point)[0]
    assert distance == pytest.approx(1.0 - r, abs=1e-12)


def test_rectangle_distance_inside():
    """Inside a rectangle the distance is the smallest gap to a side."""
    square = DomainSpec.unit_square()
    distances = square.distance_to_boundary(np.array([[0.5, 0.5], [0.1, 0.7], [0.9, 0.95]]))
    assert np.allclose(distances, [0.5, 0.1, 0.05])


# ============================================================================
# Triangulation
# ============================================================================

def test_disk_mesh_invariants(coarse_disk_mesh):
    """Conforming, convex, symmetric, boundary vertices on the circle, edges bounded."""
    mesh = coarse_disk_mesh
    assert mesh.is_conforming()
    assert mesh.is_convex()
    assert mesh.symmetric
    assert mesh.h_max <= 1.5 * 0.1 * (1 + 1e-9)
    radii = np.hypot(*mesh.vertices[mesh.boundary_mask].T)
    assert np.allclose(radii, 1.0, atol=1e-12)
    assert np.all(np.hypot(*mesh.vertices[~mesh.boundary_mask].T) < 1.0)
    assert 0.0 < mesh.area_deficit < 0.05
    assert mesh.mirror_permutation(0) is not None
    assert mesh.mirror_permutation(1) is not None


def test_interior_mirrors(coarse_disk_mesh):
    """Mirror maps in interior numbering are involutions matching the vertex reflection."""
    mesh = coarse_disk_mesh
    interior = mesh.vertices[mesh.interior_indices]
    for axis, perm in enumerate(mesh.interior_mirrors):
        assert np.array_equal(perm[perm], np.arange(len(perm)))
        flipped = interior.copy()
        flipped[:, axis] = -flipped[:, axis]
        assert np.allclose(interior[perm], flipped, atol=1e-12)
    assert len(mesh.interior_mirrors) == 2
    off_center = refine(mesh, GradingSpec(
        focus=(0.3, 0.2), inner_h=0.03, outer_h=0.1, transition_radius=0.1
    ))
    assert off_center.interior_mirrors == ()


def test_square_mesh_covers_square(square_mesh):
    """The triangulated area of a rectangle is exact."""
    assert square_mesh.area == pytest.approx(1.0, abs=1e-12)
    boundary = square_mesh.vertices[square_mesh.boundary_mask]
    on_side = (
        np.isclose(boundary[:, 0], 0.0) | np.isclose(boundary[:, 0], 1.0)
        | np.isclose(boundary[:, 1], 0.0) | np.isclose(boundary[:, 1], 1.0)
    )
    assert on_side.all()
    assert square_mesh.is_conforming()


def test_polygon_mesh():
    """A triangle is meshed without symmetry."""
    spec = DomainSpec.convex_polygon([(0, 0), (1, 0), (0, 1)])
    mesh = build_mesh(spec, 0.1)
    assert not mesh.symmetric
    assert mesh.area == pytest.approx(0.5, abs=1e-12)
    assert mesh.is_conforming()


def test_build_mesh_rejects_large_h():
    with pytest.raises(ValueError, match="target_h"):
        build_mesh(DomainSpec.disk(1.0), 0.6)


def test_build_mesh_vertex_cap():
    """The cap is enforced with the estimate attached."""
    with pytest.raises(MeshSizeError) as excinfo:
        build_mesh(DomainSpec.disk(1.0), 0.01, max_vertices=500)
    assert excinfo.value.cap == 500


def test_mesh_rejects_clockwise_triangle():
    with pytest.raises(ValueError, match="clockwise"):
        Mesh(
            vertices=np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]),
            triangles=np.array([[0, 2, 1]]),
            boundary_mask=np.array([True, True, True]),
        )


def test_locator_interpolates_linear_functions_exactly(coarse_disk_mesh):
    """P1 interpolation reproduces affine functions; outside points give NaN."""
    values = 2.0 * coarse_disk_mesh.vertices[:, 0] - 3.0 * coarse_disk_mesh.vertices[:, 1] + 1.0
    points = np.array([[0.1, 0.2], [-0.5, 0.3], [0.0, -0.7], [2.0, 0.0]])
    result = coarse_disk_mesh.interpolate(values, points)
    expected = 2.0 * points[:3, 0] - 3.0 * points[:3, 1] + 1.0
    assert np.allclose(result[:3], expected, atol=1e-12)
    assert math.isnan(result[3])


# ============================================================================
# Refinement
# ============================================================================

def test_refine_about_center_stays_symmetric(coarse_disk_mesh):
    """Graded refinement about the center keeps the mirror symmetry and meets inner_h."""
    grading = GradingSpec(focus=(0.0, 0.0), inner_h=0.02, outer_h=0.1, transition_radius=0.1)
    refined = refine(coarse_disk_mesh, grading)
    assert refined.n_vertices > coarse_disk_mesh.n_vertices
    assert refined.symmetric
    assert refined.is_conforming()
    assert refined.local_h((0.0, 0.0), 0.05) <= 0.02 * (1 + 1e-9)
    assert refined.mirror_permutation(0) is not None


def test_refine_off_center(coarse_disk_mesh):
    grading = GradingSpec(focus=(0.3, 0.2), inner_h=0.03, outer_h=0.1, transition_radius=0.1)
    refined = refine(coarse_disk_mesh, grading)
    assert not refined.symmetric
    assert refined.local_h((0.3, 0.2), 0.05) <= 0.03 * (1 + 1e-9)
    assert np.allclose(np.hypot(*refined.vertices[refined.boundary_mask].T), 1.0, atol=1e-12)


def test_refine_focus_outside(coarse_disk_mesh):
    grading = GradingSpec(focus=(2.0, 0.0), inner_h=0.02, outer_h=0.1, transition_radius=0.1)
    with pytest.raises(DomainError):
        refine(coarse_disk_mesh, grading)


def test_refine_cap_checked_before_splitting(coarse_disk_mesh):
    grading = GradingSpec(focus=(0.0, 0.0), inner_h=1e-4, outer_h=0.1, transition_radius=0.5)
    with pytest.raises(MeshSizeError):
        refine(coarse_disk_mesh, grading, max_vertices=10_000)


def test_grading_for_resolves_epsilon():
    grading = grading_for((0.0, 0.0), epsilon=0.01, outer_h=0.1)
    assert grading.inner_h == pytest.approx(0.0025)
    assert grading.transition_radius == pytest.approx(0.06)


# ============================================================================
# Mesh files and the cache
# ============================================================================

def test_mesh_file_round_trip(tmp_path, coarse_disk_mesh, unit_disk):
    """A written mesh reads back bit-identical and symmetric."""
    path = write_mesh(coarse_disk_mesh, tmp_path / "disk.mesh")
    again = read_mesh(path, unit_disk)
    assert np.array_equal(again.vertices, coarse_disk_mesh.vertices)
    assert np.array_equal(again.triangles, coarse_disk_mesh.triangles)
    assert again.symmetric


def test_read_mesh_bad_header(tmp_path):
    path = tmp_path / "bad.mesh"
    path.write_text("nodes 3 cells 1\n")
    with pytest.raises(SnapshotFormatError, match="bad header"):
        read_mesh(path)


def test_read_mesh_truncated(tmp_path):
    path = tmp_path / "short.mesh"
    path.write_text("vertices 3 triangles 1\n0.0 0.0 1\n")
    with pytest.raises(SnapshotFormatError, match="body lines"):
        read_mesh(path)


def test_cached_build_mesh_reuses_file(tmp_path, unit_disk, mocker):
    """The second call reads the cached file instead of triangulating."""
    first = cached_build_mesh(unit_disk, 0.2, cache_dir=tmp_path)
    assert len(list(tmp_path.glob("mesh-*.txt"))) == 1
    spy = mocker.patch("least_energy_lab.mesh.io.build_mesh")
    second = cached_build_mesh(unit_disk, 0.2, cache_dir=tmp_path)
    spy.assert_not_called()
    assert np.array_equal(first.vertices, second.vertices)
    assert second.spec is unit_disk
