"""
Tests for environment-driven configuration validation.

Run with: pytest tests/test_config.py
"""
import pytest

from least_energy_lab.shared_libraries import constants


def test_defaults_are_valid():
    assert constants.validate_configuration() == []


@pytest.mark.parametrize("name, value, variable", [
    ("SOLVER_TOL", 0.5, "LEL_SOLVER_TOL"),
    ("EIGEN_TOL", 0.0, "LEL_EIGEN_TOL"),
    ("CG_ITERATION_FACTOR", 0, "LEL_CG_ITERATION_FACTOR"),
    ("MAX_MESH_VERTICES", 50, "LEL_MAX_MESH_VERTICES"),
    ("CONTINUATION_RATIO", 1.0, "LEL_CONTINUATION_RATIO"),
    ("CONTINUATION_START", 6.0, "LEL_CONTINUATION_START"),
    ("GRADING_RATE", 2.0, "LEL_GRADING_RATE"),
    ("DEFAULT_EIGENPAIRS", 0, "LEL_DEFAULT_EIGENPAIRS"),
    ("DEFAULT_JOBS", 0, "LEL_DEFAULT_JOBS"),
])
def test_out_of_range_setting_is_reported(monkeypatch, name, value, variable):
    monkeypatch.setattr(constants, name, value)
    errors = constants.validate_configuration()
    assert len(errors) == 1
    assert errors[0].startswith(variable)


def test_production_requires_cache_dir(monkeypatch):
    monkeypatch.setattr(constants, "ENVIRONMENT", "production")
    monkeypatch.setattr(constants, "CACHE_DIR", "")
    assert constants.validate_configuration() == ["LEL_CACHE_DIR must be set in production"]
    with pytest.raises(RuntimeError, match="Invalid configuration"):
        constants.validate_or_exit()


def test_development_only_warns(monkeypatch, caplog):
    monkeypatch.setattr(constants, "SOLVER_TOL", 0.5)
    constants.validate_or_exit()
    assert "Configuration warning" in caplog.text
