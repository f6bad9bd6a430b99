"""
Tests for the experiment harness: config parsing, the runner, run comparison and the command line.

Run with: pytest tests/test_cli.py
"""
import json
import shutil
from dataclasses import replace

import pytest
from pydantic import ValidationError

from least_energy_lab.cli import checks as checks_module
from least_energy_lab.cli import runner as runner_module
from least_energy_lab.cli.config import ExperimentConfig, dump_config, load_config
from least_energy_lab.cli.main import main
from least_energy_lab.cli.plots import plot_script
from least_energy_lab.cli.runner import (
    RunOutcome,
    aggregate_status,
    compare,
    continuation_schedule,
    load_summary,
    run,
)
from least_energy_lab.shared_libraries.errors import SummaryError
from least_energy_lab.shared_libraries.models import CheckName, CheckStatus, ClaimResult


def minimal_config(**overrides):
    values = dict(
        name="test",
        domain={"kind": "disk", "radius": 1.0},
        p_schedule=[10.0, 20.0],
        checks=["moser"],
    )
    values.update(overrides)
    return ExperimentConfig.model_validate(values)


def claim(status):
    return ClaimResult("x", CheckName.MOSER, status)


def two_cell_config():
    """Two cheap (disk, λ) cells so the worker pool actually starts."""
    return minimal_config(
        lambda_values=[0.0, 1.0], p_schedule=[3.0], mesh_h=0.1, checks=["bounds"]
    )


@pytest.fixture
def passing_run(tmp_path, test_data_dir):
    """A run directory holding the passing summary fixture."""
    run_dir = tmp_path / "run_a"
    run_dir.mkdir()
    shutil.copy(test_data_dir / "summary_pass.json", run_dir / "summary.json")
    return run_dir


# ============================================================================
# Config
# ============================================================================

def test_bad_p_schedule_names_the_field(test_data_dir):
    with pytest.raises(ValidationError) as excinfo:
        load_config(test_data_dir / "bad_p_schedule.json")
    assert "p_schedule" in str(excinfo.value)


def test_single_domain_key(test_data_dir):
    config = load_config(test_data_dir / "moser_disk.json")
    assert len(config.domains) == 1
    assert config.domains[0].radius == 1.0
    assert config.oracle_schedule == [10.0, 20.0]
    assert config.oracle_radius == 1.0


def test_domain_and_domains_together_rejected():
    with pytest.raises(ValidationError):
        minimal_config(domains=[{"kind": "disk", "radius": 1.0}])


@pytest.mark.parametrize("overrides, field", [
    ({"domain": {"kind": "disk"}}, "radius"),
    ({"domain": {"kind": "disk", "radius": 1.0, "sides": 3}}, "sides"),
    ({"lambda_values": [0.0, -1.0]}, "lambda_values"),
    ({"checks": ["bogus"]}, "checks"),
    ({"refinement_levels": 7}, "refinement_levels"),
])
def test_invalid_configs(overrides, field):
    with pytest.raises(ValidationError) as excinfo:
        minimal_config(**overrides)
    assert field in str(excinfo.value)


def test_nonconvex_polygon_rejected():
    with pytest.raises(ValidationError):
        minimal_config(domain={
            "kind": "convex_polygon",
            "vertices": [[0, 0], [2, 0], [1, 0.5], [2, 2], [0, 2]],
        })


def test_config_normalization():
    """λ values are sorted and checks follow the registry order."""
    config = minimal_config(lambda_values=[1.0, 0.0], checks=["oracle_compare", "bounds"])
    assert config.lambda_values == [0.0, 1.0]
    assert config.checks == [CheckName.BOUNDS, CheckName.ORACLE_COMPARE]
    assert config.with_checks([CheckName.MOSER]).checks == [CheckName.MOSER]


def test_oracle_radius_without_disk():
    config = minimal_config(
        domain={"kind": "rectangle", "width": 2.0, "height": 1.0}, oracle_p_values=[50.0]
    )
    assert config.oracle_radius == 1.0
    assert config.oracle_schedule == [50.0]


def test_dump_and_load(tmp_path):
    config = minimal_config(lambda_values=[0.0, 2.0], mesh_h=0.1)
    path = dump_config(config, tmp_path / "nested" / "config.json")
    assert load_config(path) == config


# ============================================================================
# Runner
# ============================================================================

def test_continuation_schedule_merges_exponents():
    assert continuation_schedule([10.0, 20.0]) == pytest.approx(
        [3.0, 4.5, 6.75, 10.0, 10.125, 15.1875, 20.0]
    )


def test_aggregate_status():
    assert aggregate_status([claim(CheckStatus.PASS)] * 2) is CheckStatus.PASS
    assert aggregate_status([claim(CheckStatus.PASS), claim(CheckStatus.FAIL)]) is CheckStatus.FAIL
    assert aggregate_status(
        [claim(CheckStatus.PASS), claim(CheckStatus.UNRESOLVED)]
    ) is CheckStatus.UNRESOLVED
    assert aggregate_status(
        [claim(CheckStatus.UNRESOLVED), claim(CheckStatus.FAIL)]
    ) is CheckStatus.FAIL


def test_crashed_check_becomes_failed_claim(tmp_path, monkeypatch):
    """An exception inside a check is recorded and the run still writes its summary."""
    def boom(ctx):
        raise RuntimeError("boom")

    monkeypatch.setitem(checks_module.CHECKS_BY_NAME[CheckName.MOSER], "run", boom)
    outcome = run(minimal_config(), out_dir=tmp_path / "run")
    assert outcome.exit_code == 1
    assert outcome.summary["stages"] == [{"stage": "moser", "error": "RuntimeError: boom"}]
    entry = outcome.summary["checks"][0]
    assert entry["status"] == "fail"
    assert entry["claims"][0]["claim"] == "moser.error"
    assert (tmp_path / "run" / "moser" / "claims.csv").is_file()
    assert load_summary(tmp_path / "run")["status"] == "fail"


def test_worker_pool_matches_serial_run(tmp_path):
    """Cells solved in two worker processes give byte-identical tables, in plan order."""
    config = two_cell_config()
    run(config, out_dir=tmp_path / "serial", jobs=1)
    run(config, out_dir=tmp_path / "pool", jobs=2)
    tables = sorted((tmp_path / "serial").rglob("*.csv"))
    assert (tmp_path / "serial" / "cells.csv") in tables
    for csv_a in tables:
        csv_b = tmp_path / "pool" / csv_a.relative_to(tmp_path / "serial")
        assert csv_a.read_bytes() == csv_b.read_bytes(), csv_a.name
    assert compare(tmp_path / "serial", tmp_path / "pool").rows == []


def test_failed_cell_in_worker_is_recorded(mocker, tmp_path):
    """A cell raising inside a worker becomes a stage record; the other cell still completes."""
    config = two_cell_config()
    out = tmp_path / "run"
    good, bad = runner_module.plan_cells(config, out)
    # continuation cannot end at p = 2 when it must pass through p = 3
    broken = replace(bad, p_schedule=(3.0, 2.0))
    mocker.patch("least_energy_lab.cli.runner.plan_cells", return_value=[good, broken])

    outcome = run(config, out_dir=out, jobs=2)
    (stage,) = outcome.summary["stages"]
    assert stage["stage"] == f"solve:{bad.label}"
    assert stage["error"].startswith("ValueError: schedule must end at p=2.0")
    index = (out / "cells.csv").read_text()
    assert good.label in index
    assert bad.label not in index
    assert (out / "cells" / good.label / "field_p3.txt").is_file()
    assert not (out / "cells" / bad.label).exists()

# ============================================================================
# Comparing runs
# ============================================================================

def test_compare_identical_runs(passing_run, tmp_path):
    other = tmp_path / "run_b"
    shutil.copytree(passing_run, other)
    outcome = compare(passing_run, other)
    assert outcome.rows == []
    assert outcome.exit_code == 0


def test_compare_flipped_claim(passing_run, tmp_path):
    other = tmp_path / "run_b"
    other.mkdir()
    summary = json.loads((passing_run / "summary.json").read_text())
    summary["checks"][0]["claims"][1].update(status="fail", measured=1.2)
    (other / "summary.json").write_text(json.dumps(summary))

    outcome = compare(passing_run, other)
    assert outcome.flipped == [("moser", "oracle:moser.c_upper")]
    assert outcome.exit_code == 1
    row = outcome.rows[0]
    assert (row["status_a"], row["status_b"]) == ("pass", "fail")
    assert row["delta"] == pytest.approx(0.4)


def test_compare_missing_and_corrupted(passing_run, tmp_path):
    with pytest.raises(SummaryError, match="missing"):
        compare(passing_run, tmp_path / "nowhere")
    broken = tmp_path / "broken"
    broken.mkdir()
    (broken / "summary.json").write_text("{not json")
    with pytest.raises(SummaryError, match="corrupted"):
        compare(passing_run, broken)
    (broken / "summary.json").write_text(json.dumps({"checks": "none"}))
    with pytest.raises(SummaryError, match="corrupted"):
        load_summary(broken)


# ============================================================================
# Command line
# ============================================================================

def test_main_compare(passing_run, tmp_path, capsys):
    other = tmp_path / "run_b"
    shutil.copytree(passing_run, other)
    assert main(["compare", str(passing_run), str(other)]) == 0
    assert "No differences" in capsys.readouterr().out
    assert main(["compare", str(passing_run), str(tmp_path / "nowhere")]) == 2


def test_main_rejects_bad_input(test_data_dir, tmp_path, capsys):
    assert main(["sweep", "--config", str(test_data_dir / "bad_p_schedule.json")]) == 2
    assert "Invalid config" in capsys.readouterr().out
    assert main(["sweep", "--config", str(tmp_path / "absent.json")]) == 2
    assert main(["moser", "--jobs", "0"]) == 2


def test_subcommand_selects_checks(mocker, tmp_path, test_data_dir):
    summary = json.loads((test_data_dir / "summary_pass.json").read_text())
    fake = mocker.patch(
        "least_energy_lab.cli.main.run",
        return_value=RunOutcome(exit_code=0, summary=summary, out_dir=tmp_path),
    )
    assert main(["sweep", "--out", str(tmp_path)]) == 0
    kwargs = fake.call_args.kwargs
    assert kwargs["checks"] == [CheckName.BOUNDS]
    assert kwargs["out_dir"] == str(tmp_path)
    assert kwargs["jobs"] is None


def test_moser_run_end_to_end(test_data_dir, tmp_path):
    """Moser claims need no 2D solve and pass on the unit disk."""
    out = tmp_path / "run"
    code = main(["moser", "--config", str(test_data_dir / "moser_disk.json"), "--out", str(out)])
    assert code == 0
    summary = load_summary(out)
    assert summary["status"] == "pass"
    assert [check["check"] for check in summary["checks"]] == ["moser"]
    assert (out / "moser" / "moser.csv").is_file()
    assert (out / "config.json").is_file()
    assert (out / "plots.gp").is_file()
    assert not (out / "cells.csv").exists()


def test_plot_script_without_tables(tmp_path):
    script = plot_script(tmp_path)
    assert script.startswith("# generated by least-energy-lab")
    assert "no profile or bounds tables" in script


def test_plot_script_lists_bounds_tables(tmp_path):
    (tmp_path / "bounds").mkdir()
    (tmp_path / "bounds" / "disk_r1_lam0.csv").write_text("")
    (tmp_path / "bounds" / "claims.csv").write_text("")
    script = plot_script(tmp_path)
    assert "'bounds/disk_r1_lam0.csv'" in script
    assert "claims.csv" not in script
    assert "set output 'bounds_sup_norm.png'" in script
