"""
Tests for logging setup and the structured logger.

Run with: pytest tests/test_logging_config.py
"""
import json
import logging
import sys

import pytest

from least_energy_lab.shared_libraries.logging_config import (
    JSONFormatter,
    StructuredLogger,
    configure_logging,
)


@pytest.fixture
def restore_root_logger():
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield root
    root.handlers[:] = handlers
    root.setLevel(level)


def make_record(**extra):
    record = logging.LogRecord("lab.test", logging.INFO, __file__, 10, "solve %s", ("done",), None)
    for key, value in extra.items():
        setattr(record, key, value)
    return record


# ============================================================================
# JSON formatter
# ============================================================================

def test_json_formatter_fields():
    payload = json.loads(JSONFormatter().format(make_record(p=3.0, lam=0.5, cell="disk_r1_lam0.5")))
    assert payload["message"] == "solve done"
    assert payload["level"] == "INFO"
    assert payload["logger"] == "lab.test"
    assert (payload["p"], payload["lam"], payload["cell"]) == (3.0, 0.5, "disk_r1_lam0.5")
    assert "exception" not in payload


def test_json_formatter_ignores_unknown_attributes():
    payload = json.loads(JSONFormatter().format(make_record(secret="x")))
    assert "secret" not in payload


def test_json_formatter_exception():
    try:
        raise ValueError("bad mesh")
    except ValueError:
        record = logging.LogRecord("lab", logging.ERROR, __file__, 1, "failed", (), sys.exc_info())
    payload = json.loads(JSONFormatter().format(record))
    assert "ValueError: bad mesh" in payload["exception"]


# ============================================================================
# configure_logging
# ============================================================================

def test_configure_logging_json(restore_root_logger):
    configure_logging(level="warning", format_type="json", output="stdout")
    root = restore_root_logger
    assert root.level == logging.WARNING
    assert len(root.handlers) == 1
    assert isinstance(root.handlers[0].formatter, JSONFormatter)


def test_configure_logging_development_defaults(restore_root_logger):
    configure_logging()
    root = restore_root_logger
    assert root.level == logging.DEBUG
    assert not isinstance(root.handlers[0].formatter, JSONFormatter)


# ============================================================================
# StructuredLogger
# ============================================================================

def test_stage_failed_context(caplog):
    structured = StructuredLogger(logging.getLogger("lab.runner"))
    with caplog.at_level(logging.WARNING, logger="lab.runner"):
        structured.log_stage_failed("solve", RuntimeError("diverged"), cell="disk_r1_lam0")
    record = caplog.records[-1]
    assert record.event == "stage_failed"
    assert record.error_type == "RuntimeError"
    assert record.cell == "disk_r1_lam0"
    assert "Stage solve failed: diverged" in record.getMessage()


def test_solve_completed_context(caplog):
    structured = StructuredLogger(logging.getLogger("lab.solver"))
    with caplog.at_level(logging.INFO, logger="lab.solver"):
        structured.log_solve_completed(
            10.0, 0.0, iterations=12, residual=1e-10, duration_seconds=0.5
        )
    record = caplog.records[-1]
    assert (record.p, record.iterations, record.event) == (10.0, 12, "solve_completed")


def test_log_error_attaches_exception(caplog):
    structured = StructuredLogger(logging.getLogger("lab.cli"))
    with caplog.at_level(logging.ERROR, logger="lab.cli"):
        structured.log_error("Run aborted", ValueError("no cells"), stage="claims")
    record = caplog.records[-1]
    assert record.stage == "claims"
    assert record.error_message == "no cells"
    assert record.exc_info is not None
