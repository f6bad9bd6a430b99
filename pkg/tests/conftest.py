"""
Shared pytest fixtures and configuration.

This file is automatically loaded by pytest and makes fixtures
available to all test files.
"""

import pytest

from least_energy_lab.mesh import DomainSpec, build_mesh
from least_energy_lab.radial_oracle import shoot
from least_energy_lab.shared_libraries import constants
from least_energy_lab.shared_libraries.models import ProblemParams
from least_energy_lab.solver import minimize


# ============================================================================
# Environment Setup
# ============================================================================

@pytest.fixture(autouse=True)
def setup_test_env(monkeypatch, tmp_path):
    """
    Automatically set up test environment for all tests.

    Numerical settings are pinned to their defaults so a developer's .env
    cannot change verdicts, and the mesh cache points at a per-test
    directory so tests never share cached meshes.
    """
    monkeypatch.setenv('ENVIRONMENT', 'development')
    monkeypatch.setenv('LEL_CACHE_DIR', str(tmp_path / 'mesh-cache'))
    monkeypatch.setenv('LEL_SOLVER_TOL', '1e-9')
    monkeypatch.setenv('LEL_DEFAULT_JOBS', '1')

    # constants are read at import time
    monkeypatch.setattr(constants, 'ENVIRONMENT', 'development')
    monkeypatch.setattr(constants, 'CACHE_DIR', str(tmp_path / 'mesh-cache'))

    # Set test mode
    monkeypatch.setenv('TESTING', 'true')


# ============================================================================
# Meshes
# ============================================================================

@pytest.fixture(scope='session')
def unit_disk():
    return DomainSpec.disk(1.0)


@pytest.fixture(scope='session')
def coarse_disk_mesh(unit_disk):
    """Unit disk, target h = 0.1 (a few hundred vertices)."""
    return build_mesh(unit_disk, 0.1)


@pytest.fixture(scope='session')
def disk_mesh(unit_disk):
    """Unit disk, target h = 0.05."""
    return build_mesh(unit_disk, 0.05)


@pytest.fixture(scope='session')
def square_mesh():
    """[0, 1]², target h = 0.1."""
    return build_mesh(DomainSpec.unit_square(), 0.1)


# ============================================================================
# Solves
# ============================================================================

@pytest.fixture(scope='session')
def coarse_disk_report(coarse_disk_mesh):
    """Least-energy solve at λ = 0, p = 3 on the coarse disk."""
    return minimize(ProblemParams(lam=0.0, p=3.0), coarse_disk_mesh)


@pytest.fixture(scope='session')
def disk_report(disk_mesh):
    """Least-energy solve at λ = 0, p = 3 on the h = 0.05 disk."""
    return minimize(ProblemParams(lam=0.0, p=3.0), disk_mesh)


@pytest.fixture(scope='session')
def oracle_p3():
    return shoot(3.0)


@pytest.fixture(scope='session')
def oracle_p100():
    return shoot(100.0)


# ============================================================================
# Pytest Configuration Hooks
# ============================================================================

def pytest_configure(config):
    """Configure pytest with custom markers."""
    config.addinivalue_line(
        "markers", "unit: mark test as a unit test (fast, isolated)"
    )
    config.addinivalue_line(
        "markers", "integration: mark test as an integration test"
    )
    config.addinivalue_line(
        "markers", "e2e: mark test as an end-to-end test"
    )
    config.addinivalue_line(
        "markers", "slow: mark test as slow (takes >5 seconds)"
    )


def pytest_collection_modifyitems(config, items):
    """
    Modify test collection to add markers automatically based on test names.

    This adds markers based on naming conventions:
    - Tests in the closed-form modules get the 'unit' marker
    - Tests with 'integration' in name get 'integration' marker
    - Tests with 'e2e' in name get 'e2e' marker
    """
    for item in items:
        for name in ('test_limit_theory', 'test_config', 'test_logging_config'):
            if name in str(item.fspath):
                item.add_marker(pytest.mark.unit)

        # Add integration marker to integration tests
        if 'integration' in item.nodeid:
            item.add_marker(pytest.mark.integration)

        # Add e2e marker to end-to-end tests
        if 'e2e' in item.nodeid:
            item.add_marker(pytest.mark.e2e)


# ============================================================================
# Session Fixtures
# ============================================================================

@pytest.fixture(scope='session')
def test_data_dir():
    """Return path to test data directory."""
    import pathlib
    return pathlib.Path(__file__).parent / 'fixtures'


# ============================================================================
# Utility Functions
# ============================================================================

def load_test_fixture(filename):
    """
    Load a test fixture file.

    Args:
        filename: Name of fixture file (e.g., 'disk_p3.json')

    Returns:
        Contents of fixture file
    """
    import json
    from pathlib import Path

    fixture_path = Path(__file__).parent / 'fixtures' / filename

    if not fixture_path.exists():
        raise FileNotFoundError(f"Fixture not found: {fixture_path}")

    if filename.endswith('.json'):
        return json.loads(fixture_path.read_text())
    else:
        return fixture_path.read_text()
