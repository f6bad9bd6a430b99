"""
CSV tables (RFC 4180: comma separated, CRLF rows, header first).

Floats are written with repr() so identical runs give identical bytes.
"""
import csv
from pathlib import Path
from typing import Any, Dict, Iterable, Sequence, Union

import numpy as np

from ..shared_libraries.models import BoundsRow, ProfileComparison, StarShapeReport

PathLike = Union[str, Path]

BOUNDS_COLUMNS = (
    "p", "lambda", "sup_norm", "sup_norm_pow", "c_squared", "c_squared_p", "p_int_u_p1",
    "p_energy", "sobolev_ratio", "lower_bound", "moser_bound", "max_point_boundary_distance",
)
PROFILE_COLUMNS = ("p", "lambda", "X1", "X2", "radius", "phi", "bubble", "discrepancy")
VIOLATION_COLUMNS = ("triangle", "x", "y", "value")
TRACE_COLUMNS = ("r", "u", "du")
AMPLITUDE_COLUMNS = ("p", "lambda", "amplitude", "c_squared", "epsilon")
ROBIN_COLUMNS = ("x", "y", "robin")
CLAIM_COLUMNS = ("claim", "check", "status", "measured", "threshold", "detail")


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


def write_rows(path: PathLike, rows: Iterable[Dict[str, Any]], columns: Sequence[str]) -> Path:
    """Write dict rows under a fixed header; unknown keys are an error."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=list(columns), lineterminator="\r\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({key: _cell(value) for key, value in row.items()})
    return path


def write_bounds(rows: Sequence[BoundsRow], path: PathLike) -> Path:
    return write_rows(path, (row.to_row() for row in rows), BOUNDS_COLUMNS)


def write_profile(comparison: ProfileComparison, path: PathLike) -> Path:
    return write_rows(path, comparison.rows(), PROFILE_COLUMNS)


def write_violations(report: StarShapeReport, path: PathLike) -> Path:
    rows = (
        {"triangle": v.triangle, "x": v.barycenter[0], "y": v.barycenter[1], "value": v.value}
        for v in report.violations
    )
    return write_rows(path, rows, VIOLATION_COLUMNS)


def read_rows(path: PathLike) -> list:
    """Rows of a CSV written by write_rows, as dicts of strings."""
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))
