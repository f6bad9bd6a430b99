"""
Run orchestration: solve the (domain, λ) cells, run the enabled checks,
write the artifact tree, and compare two finished runs.

    <out>/
      config.json            the validated config
      summary.json           one entry per enabled check with its claims
      cells.csv              merged index of every 2D solve
      cells/<cell>/          mesh_p<p>.txt and field_p<p>.txt per exponent
      <check>/claims.csv     claim verdicts, plus the check's own tables
      plots.gp               gnuplot script over the emitted CSVs

Cells run in worker processes (up to ``jobs``) and write only inside
their own directory; the index, the checks and the summary are produced
afterwards in this process, in plan order.
"""
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..diagnostics.export import CLAIM_COLUMNS, write_rows
from ..mesh.domain import DomainSpec
from ..mesh.io import cached_build_mesh, write_mesh
from ..mesh.triangulation import Mesh, refine
from ..shared_libraries.errors import ContinuationError, SummaryError
from ..shared_libraries.logging_config import StructuredLogger
from ..shared_libraries.models import (
    CheckName,
    CheckStatus,
    ClaimResult,
    GradingSpec,
    ProblemParams,
)
from ..solver import continue_in_p, default_schedule, write_snapshot
from .checks import CHECKS_BY_NAME, CellResult, CheckContext, cell_label
from .config import ExperimentConfig, dump_config
from .plots import write_plot_script

logger = logging.getLogger(__name__)
structured = StructuredLogger(logger)

PathLike = Union[str, Path]

SUMMARY_FILE = "summary.json"
CELL_COLUMNS = (
    "cell", "domain", "lambda", "p", "sup_norm", "c_squared", "pde_residual", "iterations",
    "max_x", "max_y", "vertices",
)
COMPARE_COLUMNS = ("check", "claim", "status_a", "status_b", "measured_a", "measured_b", "delta")


@dataclass(frozen=True)
class CellTask:
    """Inputs of one worker: everything is picklable."""
    domain: DomainSpec
    lam: float
    mesh: Mesh
    p_schedule: Tuple[float, ...]
    directory: Path
    grading: Optional[GradingSpec] = None
    remesh: bool = True
    tol: Optional[float] = None

    @property
    def label(self) -> str:
        return cell_label(self.domain, self.lam)


@dataclass
class RunOutcome:
    exit_code: int
    summary: Dict[str, Any]
    out_dir: Path


@dataclass
class CompareOutcome:
    rows: List[Dict[str, Any]] = field(default_factory=list)
    flipped: List[Tuple[str, str]] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return 1 if self.flipped else 0


# ----------------------------------------------------------------------
# Cells
# ----------------------------------------------------------------------

def continuation_schedule(p_schedule: Sequence[float]) -> List[float]:
    """The configured exponents merged into the geometric warm-up ending at the largest one."""
    return sorted(set(default_schedule(p_schedule[-1])) | {float(p) for p in p_schedule})


def plan_cells(config: ExperimentConfig, out_dir: Path) -> List[CellTask]:
    """Domain-major, λ-minor; base meshes are built (or read from the cache) here, once."""
    grading = config.grading.to_spec() if config.grading is not None else None
    tasks = []
    for spec in config.domain_specs():
        mesh = cached_build_mesh(spec, config.mesh_h)
        for lam in config.lambda_values:
            tasks.append(CellTask(
                domain=spec,
                lam=lam,
                mesh=mesh,
                p_schedule=tuple(config.p_schedule),
                directory=out_dir / "cells" / cell_label(spec, lam),
                grading=grading,
                remesh=config.remesh,
                tol=config.solver_tol,
            ))
    return tasks


def solve_cell(task: CellTask) -> CellResult:
    """
    Continue in p up to the largest configured exponent and keep the reports
    at the configured ones. A failed stage keeps the completed prefix.
    """
    mesh = task.mesh if task.grading is None else refine(task.mesh, task.grading)
    params = ProblemParams(lam=task.lam, p=task.p_schedule[-1])
    error = None
    try:
        reports = continue_in_p(
            params, mesh, continuation_schedule(task.p_schedule), tol=task.tol, remesh=task.remesh
        )
    except ContinuationError as e:
        reports, error = e.completed, str(e)

    wanted = set(task.p_schedule)
    kept = [report for report in reports if report.p in wanted]
    for report in kept:
        write_mesh(report.mesh, task.directory / f"mesh_p{report.p:g}.txt")
        write_snapshot(
            report.solution, report.p, report.lam, task.directory / f"field_p{report.p:g}.txt"
        )
    return CellResult(
        domain=task.domain, lam=task.lam, reports=kept, error=error, directory=task.directory
    )


def _failed_cell(task: CellTask, error: Exception) -> CellResult:
    structured.log_stage_failed("solve", error, cell=task.label)
    return CellResult(
        domain=task.domain,
        lam=task.lam,
        error=f"{type(error).__name__}: {error}",
        directory=task.directory,
    )


def _solve_guarded(task: CellTask) -> CellResult:
    try:
        return solve_cell(task)
    except Exception as e:
        return _failed_cell(task, e)


def solve_cells(tasks: Sequence[CellTask], jobs: int = 1) -> List[CellResult]:
    """Results in task order whatever order the workers finish in."""
    results: List[Optional[CellResult]] = [None] * len(tasks)
    if jobs <= 1 or len(tasks) <= 1:
        for index, task in enumerate(tasks):
            results[index] = _solve_guarded(task)
        return results

    with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as executor:
        futures = {executor.submit(solve_cell, task): index for index, task in enumerate(tasks)}
        for future in as_completed(futures):
            index = futures[future]
            try:
                results[index] = future.result()
            except Exception as e:
                results[index] = _failed_cell(tasks[index], e)
            logger.info(f"Cell {tasks[index].label} finished")
    return results


def write_cell_index(cells: Sequence[CellResult], path: Path) -> Path:
    rows = []
    for cell in cells:
        for report in cell.reports:
            rows.append({
                "cell": cell.label,
                "domain": cell.domain.label(),
                "lambda": report.lam,
                "p": report.p,
                "sup_norm": report.sup_norm,
                "c_squared": report.c_squared,
                "pde_residual": report.pde_residual,
                "iterations": report.iterations,
                "max_x": report.max_point[0],
                "max_y": report.max_point[1],
                "vertices": report.mesh.n_vertices,
            })
    return write_rows(path, rows, CELL_COLUMNS)


# ----------------------------------------------------------------------
# Checks and summary
# ----------------------------------------------------------------------

def aggregate_status(claims: Sequence[ClaimResult]) -> CheckStatus:
    """Any failure fails the check; it passes only when every claim passes."""
    statuses = {claim.status for claim in claims}
    if CheckStatus.FAIL in statuses:
        return CheckStatus.FAIL
    if statuses == {CheckStatus.PASS}:
        return CheckStatus.PASS
    return CheckStatus.UNRESOLVED


def _json_number(value: Any) -> Any:
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _claim_entry(claim: ClaimResult) -> Dict[str, Any]:
    return {key: _json_number(value) for key, value in claim.to_dict().items()}


def run_check(ctx: CheckContext, name: CheckName, stages: List[Dict[str, str]]) -> Dict[str, Any]:
    """Run one check; an exception becomes a failed claim and a stage record."""
    entry = CHECKS_BY_NAME[name]
    start = time.perf_counter()
    try:
        claims = entry["run"](ctx)
    except Exception as e:
        structured.log_stage_failed(name.value, e, check=name.value)
        message = f"{type(e).__name__}: {e}"
        stages.append({"stage": name.value, "error": message})
        claims = [ClaimResult(f"{name.value}.error", name, CheckStatus.FAIL, detail=message)]

    write_rows(ctx.path(name, "claims.csv"), (c.to_dict() for c in claims), CLAIM_COLUMNS)
    status = aggregate_status(claims)
    structured.log_check_result(name.value, status.value)
    logger.debug(f"Check {name.value} took {time.perf_counter() - start:.2f}s")
    return {
        "check": name.value,
        "description": entry["description"],
        "status": status.value,
        "claims": [_claim_entry(claim) for claim in claims],
    }


def calculate_summary_metrics(check_results: Sequence[Dict[str, Any]]) -> Dict[str, Any]:
    total = len(check_results)
    counts = {status.value: 0 for status in CheckStatus}
    for result in check_results:
        counts[result["status"]] += 1
    return {
        "total_checks": total,
        "passed": counts["pass"],
        "failed": counts["fail"],
        "unresolved": counts["unresolved"],
        "pass_rate": counts["pass"] / total if total > 0 else 0,
    }


def run(
    config: ExperimentConfig,
    out_dir: Optional[PathLike] = None,
    jobs: Optional[int] = None,
    checks: Optional[Sequence[CheckName]] = None,
) -> RunOutcome:
    """
    Solve, check and write the artifact tree.

    Exit code 0 iff every enabled check passes. Errors in one cell or one
    check are recorded under "stages" and the remaining work still runs.
    """
    out = Path(out_dir if out_dir is not None else config.output_dir)
    jobs = config.jobs if jobs is None else jobs
    enabled = list(config.checks if checks is None else checks)
    out.mkdir(parents=True, exist_ok=True)
    dump_config(config, out / "config.json")
    start = time.perf_counter()

    stages: List[Dict[str, str]] = []
    cells: List[CellResult] = []
    if any(CHECKS_BY_NAME[name]["needs_solves"] for name in enabled):
        cells = solve_cells(plan_cells(config, out), jobs)
        for cell in cells:
            if cell.error:
                stages.append({"stage": f"solve:{cell.label}", "error": cell.error})
        write_cell_index(cells, out / "cells.csv")

    ctx = CheckContext(config=config, out_dir=out, cells=cells)
    check_results = [run_check(ctx, name, stages) for name in enabled]
    metrics = calculate_summary_metrics(check_results)
    passed = bool(check_results) and metrics["passed"] == metrics["total_checks"]
    summary = {
        "name": config.name,
        "status": CheckStatus.PASS.value if passed else CheckStatus.FAIL.value,
        "metrics": metrics,
        "checks": check_results,
        "stages": stages,
        "config": config.to_json(),
    }
    write_summary(summary, out / SUMMARY_FILE)
    write_plot_script(out)
    logger.info(
        f"Run {config.name} finished in {time.perf_counter() - start:.1f}s: "
        f"{metrics['passed']}/{metrics['total_checks']} checks passed"
    )
    return RunOutcome(exit_code=0 if passed else 1, summary=summary, out_dir=out)


def solve_only(
    config: ExperimentConfig, out_dir: Optional[PathLike] = None, jobs: Optional[int] = None
) -> Tuple[List[CellResult], int]:
    """Cells, snapshots and the index without any check; exit 1 if a cell failed."""
    out = Path(out_dir if out_dir is not None else config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    dump_config(config, out / "config.json")
    cells = solve_cells(plan_cells(config, out), config.jobs if jobs is None else jobs)
    write_cell_index(cells, out / "cells.csv")
    return cells, 1 if any(cell.error for cell in cells) else 0


def write_summary(summary: Dict[str, Any], path: Path) -> Path:
    path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


# ----------------------------------------------------------------------
# Comparing runs
# ----------------------------------------------------------------------

def load_summary(run_dir: PathLike) -> Dict[str, Any]:
    """
    Raises:
        SummaryError: summary.json missing, not JSON, or without a checks list
    """
    path = Path(run_dir) / SUMMARY_FILE
    if not path.is_file():
        raise SummaryError(f"missing summary file: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise SummaryError(f"corrupted summary file {path}: {e}") from e
    if not isinstance(data, dict) or not isinstance(data.get("checks"), list):
        raise SummaryError(f"corrupted summary file {path}: no checks list")
    return data


def _claims_by_key(summary: Dict[str, Any], origin: PathLike) -> Dict[Tuple[str, str], Dict]:
    claims = {}
    for check in summary["checks"]:
        try:
            for claim in check["claims"]:
                claims[(check["check"], claim["claim"])] = claim
        except (KeyError, TypeError) as e:
            raise SummaryError(f"corrupted summary in {origin}: malformed check entry") from e
    return claims


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def compare(run_a: PathLike, run_b: PathLike) -> CompareOutcome:
    """
    Per-claim differences between two runs; unchanged claims are omitted.
    A claim that passes in one run and fails in the other is a flip.
    """
    claims_a = _claims_by_key(load_summary(run_a), run_a)
    claims_b = _claims_by_key(load_summary(run_b), run_b)
    outcome = CompareOutcome()
    for key in sorted(set(claims_a) | set(claims_b)):
        a, b = claims_a.get(key, {}), claims_b.get(key, {})
        status_a, status_b = a.get("status", ""), b.get("status", "")
        measured_a, measured_b = a.get("measured"), b.get("measured")
        if status_a == status_b and measured_a == measured_b:
            continue
        delta = None
        if _is_number(measured_a) and _is_number(measured_b):
            delta = measured_b - measured_a
        outcome.rows.append({
            "check": key[0],
            "claim": key[1],
            "status_a": status_a,
            "status_b": status_b,
            "measured_a": measured_a,
            "measured_b": measured_b,
            "delta": delta,
        })
        if {status_a, status_b} == {CheckStatus.PASS.value, CheckStatus.FAIL.value}:
            outcome.flipped.append(key)
    return outcome


def write_compare(outcome: CompareOutcome, path: PathLike) -> Path:
    return write_rows(path, outcome.rows, COMPARE_COLUMNS)
