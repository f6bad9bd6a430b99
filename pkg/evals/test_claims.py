"""
Whole-run tests over the shipped configs.

Run with: pytest evals/test_claims.py -m slow
"""
import pathlib

import pytest

from least_energy_lab.cli.config import load_config
from least_energy_lab.cli.runner import compare, run
from least_energy_lab.diagnostics.export import read_rows

EVALS_DIR = pathlib.Path(__file__).parent


def test_shipped_configs_parse():
    """Both shipped configs validate."""
    minimal = load_config(EVALS_DIR / "minimal.json")
    claims = load_config(EVALS_DIR / "claims.json")
    assert [c.value for c in minimal.checks] == ["oracle_compare"]
    assert len(claims.checks) == 8
    assert claims.oracle_schedule == [10.0, 20.0, 50.0, 100.0, 200.0]


@pytest.mark.slow
def test_minimal_config(tmp_path):
    """Unit disk at p=3 agrees with the radial oracle within 1%."""
    outcome = run(load_config(EVALS_DIR / "minimal.json"), out_dir=tmp_path / "run")
    assert outcome.exit_code == 0
    (check,) = outcome.summary["checks"]
    assert check["check"] == "oracle_compare"
    assert len(check["claims"]) == 1
    rows = read_rows(tmp_path / "run" / "oracle_compare" / "oracle_compare.csv")
    assert len(rows) == 1
    assert float(rows[0]["sup_rel_error"]) <= 0.01


@pytest.mark.slow
def test_minimal_config_is_deterministic(tmp_path):
    """Two runs of one config give byte-identical CSVs and an empty comparison."""
    config = load_config(EVALS_DIR / "minimal.json")
    run(config, out_dir=tmp_path / "a")
    run(config, out_dir=tmp_path / "b")
    for csv_a in sorted((tmp_path / "a").rglob("*.csv")):
        csv_b = tmp_path / "b" / csv_a.relative_to(tmp_path / "a")
        assert csv_a.read_bytes() == csv_b.read_bytes()
    assert compare(tmp_path / "a", tmp_path / "b").rows == []


@pytest.mark.slow
@pytest.mark.timeout(6 * 3600)
def test_claims_config(tmp_path):
    """The full claims matrix passes."""
    outcome = run(load_config(EVALS_DIR / "claims.json"), out_dir=tmp_path / "claims")
    failing = {c["check"]: c["status"] for c in outcome.summary["checks"] if c["status"] != "pass"}
    assert failing == {}
