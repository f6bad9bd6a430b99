"""
The claims → checks matrix.

Each entry of CHECK_CONFIGS names one check, whether it needs the 2D
solves, and the function that turns a CheckContext into claim verdicts.
Check functions write their own CSV tables under ``<out>/<check>/``.
"""
import logging
import math
import statistics
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..diagnostics import (
    bounds_report,
    concentration_diagnostics,
    evaluate_bounds,
    linearized_spectrum,
    oracle_bounds_row,
    rescaled_profile,
    star_shape_test,
    window_resolution,
    write_bounds,
    write_profile,
    write_rows,
    write_violations,
)
from ..diagnostics.export import AMPLITUDE_COLUMNS, ROBIN_COLUMNS
from ..diagnostics.star_shape import DEFAULT_RING_RADIUS_FACTOR
from ..limit_theory import (
    Bubble,
    mode_operator_residual,
    mode_shoot,
    moser_bound,
    moser_optimal_d,
    moser_quotient,
    robin_function,
    robin_sample_grid,
    sample_kernel,
)
from ..mesh.domain import DomainKind, DomainSpec
from ..mesh.io import cached_build_mesh
from ..radial_oracle import (
    RadialSolution,
    kernel_overlap,
    morse_index,
    oracle_concentration,
    oracle_profile,
    radial_linearized_modes,
    shoot,
)
from ..shared_libraries.constants import BUBBLE_TOTAL_MASS
from ..shared_libraries.models import (
    CheckName,
    CheckStatus,
    ClaimResult,
    GrowthVerdict,
    ProblemParams,
    SpectrumReport,
)
from ..solver import SolveReport, continue_in_p, default_schedule
from .config import ExperimentConfig

logger = logging.getLogger(__name__)

CONCENTRATION_COLUMNS = (
    "scope", "p", "lambda", "f_max", "harnack_min", "psi_integral", "bubble_mass",
    "concentration_fraction", "window_resolved",
)
SPECTRUM_COLUMNS = ("scope", "p", "lambda", "mode", "index", "eigenvalue")
MOSER_COLUMNS = ("scope", "p", "lambda", "radius", "d", "quotient", "quotient_bound")
KERNEL_COLUMNS = ("k", "verdict", "expected", "near_max", "far_max", "second_growth_rate")
ORACLE_COLUMNS = (
    "scope", "p", "lambda", "h_max", "fem_sup_norm", "oracle_sup_norm", "sup_rel_error",
    "fem_c_squared", "oracle_c_squared", "c_squared_rel_error",
)
REFINEMENT_COLUMNS = ("scope", "p", "lambda", "h_max", "sup_rel_error", "c_squared_rel_error")

# Oracle profile and kernel claims are about the large-p regime
ORACLE_PROFILE_POINTS = 3
KERNEL_MIN_P = 50.0
EXPECTED_VERDICTS = (
    GrowthVerdict.BOUNDED,
    GrowthVerdict.BOUNDED,
    GrowthVerdict.UNBOUNDED,
    GrowthVerdict.UNBOUNDED,
    GrowthVerdict.UNBOUNDED,
)
KERNEL_STEP = 1e-3
KERNEL_RADIUS = 10.0


@dataclass
class CellResult:
    """2D solves of one (domain, λ) cell at the configured exponents."""
    domain: DomainSpec
    lam: float
    reports: List[SolveReport] = field(default_factory=list)
    error: Optional[str] = None
    directory: Optional[Path] = None

    @property
    def label(self) -> str:
        return cell_label(self.domain, self.lam)


def cell_label(domain: DomainSpec, lam: float) -> str:
    return f"{domain.label()}_lam{lam:g}"


@dataclass
class CheckContext:
    """Everything a check needs: config, output root, solved cells and an oracle cache."""
    config: ExperimentConfig
    out_dir: Path
    cells: List[CellResult] = field(default_factory=list)
    _oracle: Dict[Tuple[float, float, float], RadialSolution] = field(default_factory=dict)

    def oracle(self, p: float, lam: float, radius: Optional[float] = None) -> RadialSolution:
        radius = self.config.oracle_radius if radius is None else radius
        key = (float(p), float(lam), float(radius))
        if key not in self._oracle:
            self._oracle[key] = shoot(p, lam, radius)
        return self._oracle[key]

    def path(self, check: CheckName, name: str) -> Path:
        return self.out_dir / check.value / name

    def solved_cells(self) -> List[CellResult]:
        return [cell for cell in self.cells if cell.reports]


def _verdict(
    claim: str,
    check: CheckName,
    passed: bool,
    measured: Optional[float] = None,
    threshold: Optional[float] = None,
    detail: str = "",
) -> ClaimResult:
    status = CheckStatus.PASS if passed else CheckStatus.FAIL
    return ClaimResult(claim, check, status, measured=measured, threshold=threshold, detail=detail)


def _unresolved(claim: str, check: CheckName, detail: str) -> ClaimResult:
    return ClaimResult(claim, check, CheckStatus.UNRESOLVED, detail=detail)


def _scoped(scope: str, results: Sequence[ClaimResult]) -> List[ClaimResult]:
    return [replace(result, claim=f"{scope}:{result.claim}") for result in results]


def _no_trend_to_zero(values: Sequence[float], floor: float) -> Tuple[bool, Optional[float]]:
    """Last value against floor × median; sequences shorter than three always pass."""
    if len(values) < 3:
        return True, None
    ratio = values[-1] / statistics.median(values)
    return ratio >= floor, ratio


def _relative(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


# ----------------------------------------------------------------------
# bounds
# ----------------------------------------------------------------------

def check_bounds(ctx: CheckContext) -> List[ClaimResult]:
    results = []
    for cell in ctx.solved_cells():
        rows = bounds_report(cell.reports)
        write_bounds(rows, ctx.path(CheckName.BOUNDS, f"{cell.label}.csv"))
        results.extend(_scoped(cell.label, evaluate_bounds(rows, keep_unreached=False)))

    oracle_rows, amplitudes = [], []
    for lam in ctx.config.lambda_values:
        for p in ctx.config.oracle_schedule:
            sol = ctx.oracle(p, lam)
            oracle_rows.append(oracle_bounds_row(sol))
            amplitudes.append({
                "p": sol.p,
                "lambda": sol.lam,
                "amplitude": sol.amplitude,
                "c_squared": sol.c_squared,
                "epsilon": sol.epsilon,
            })
    write_bounds(oracle_rows, ctx.path(CheckName.BOUNDS, "oracle.csv"))
    write_rows(ctx.path(CheckName.BOUNDS, "amplitudes.csv"), amplitudes, AMPLITUDE_COLUMNS)
    results.extend(_scoped("oracle", evaluate_bounds(oracle_rows)))
    return results


# ----------------------------------------------------------------------
# profile
# ----------------------------------------------------------------------

def _concentration_row(scope: str, record) -> Dict[str, Any]:
    return {
        "scope": scope,
        "p": record.p,
        "lambda": record.lam,
        "f_max": record.f_max,
        "harnack_min": record.harnack_min,
        "psi_integral": record.psi_integral,
        "bubble_mass": record.bubble_mass,
        "concentration_fraction": record.concentration_fraction,
        "window_resolved": record.window_resolved,
    }


def _decreasing_claim(
    claim: str, discrepancies: Sequence[float], tolerance: float, detail: str
) -> ClaimResult:
    decreasing = all(b < a for a, b in zip(discrepancies, discrepancies[1:]))
    last = discrepancies[-1]
    return _verdict(
        claim, CheckName.PROFILE, decreasing and last <= tolerance,
        measured=last, threshold=tolerance,
        detail=f"{detail}; sup discrepancies {[round(d, 6) for d in discrepancies]}",
    )


def check_profile(ctx: CheckContext) -> List[ClaimResult]:
    tol = ctx.config.tolerances
    results, concentration = [], []
    for cell in ctx.solved_cells():
        comparisons = []
        for report in cell.reports:
            comparison = rescaled_profile(report)
            name = f"{cell.label}_p{report.p:g}.csv"
            write_profile(comparison, ctx.path(CheckName.PROFILE, name))
            comparisons.append(comparison)
            concentration.append(_concentration_row(cell.label, concentration_diagnostics(report)))
        resolved = [c for c in comparisons if c.window_resolved]
        claim = f"{cell.label}:profile.rescaled"
        if len(resolved) < 2:
            results.append(_unresolved(
                claim, CheckName.PROFILE,
                f"{len(resolved)} of {len(comparisons)} solves resolve the rescaled window",
            ))
            continue
        tail = [c.sup_discrepancy for c in resolved[-2:]]
        ps = [c.p for c in resolved[-2:]]
        results.append(_decreasing_claim(claim, tail, tol.profile_2d, f"p={ps}"))

    for lam in ctx.config.lambda_values:
        scope = f"oracle_lam{lam:g}"
        comparisons = []
        for p in ctx.config.oracle_schedule:
            sol = ctx.oracle(p, lam)
            comparison = oracle_profile(sol)
            write_profile(comparison, ctx.path(CheckName.PROFILE, f"{scope}_p{p:g}.csv"))
            comparisons.append(comparison)
            concentration.append(_concentration_row(scope, oracle_concentration(sol)))
        claim = f"{scope}:profile.rescaled"
        tail = comparisons[-ORACLE_PROFILE_POINTS:]
        if len(tail) < 2:
            results.append(_unresolved(claim, CheckName.PROFILE, "needs two oracle exponents"))
            continue
        results.append(_decreasing_claim(
            claim, [c.sup_discrepancy for c in tail], tol.profile_oracle,
            f"p={[c.p for c in tail]}",
        ))

    write_rows(
        ctx.path(CheckName.PROFILE, "concentration.csv"), concentration, CONCENTRATION_COLUMNS
    )
    return results


# ----------------------------------------------------------------------
# star
# ----------------------------------------------------------------------

def check_star(ctx: CheckContext) -> List[ClaimResult]:
    results = []
    for cell in ctx.solved_cells():
        report = cell.reports[-1]
        claim = f"{cell.label}:star.superlevels"
        star = star_shape_test(report)
        write_violations(star, ctx.path(CheckName.STAR, f"{cell.label}_p{report.p:g}.csv"))
        detail = (
            f"p={report.p:g}, {len(star.violations)} of {star.triangles_tested} triangles, "
            f"ring h in [{star.h_ring_min:.3e}, {star.h_ring_max:.3e}]"
        )
        local_h, resolved = window_resolution(report, DEFAULT_RING_RADIUS_FACTOR)
        if not resolved:
            results.append(_unresolved(claim, CheckName.STAR, f"{detail}; local h {local_h:.3e}"))
            continue
        results.append(_verdict(
            claim, CheckName.STAR, star.star_shaped,
            measured=float(len(star.violations)), threshold=0.0, detail=detail,
        ))
    if not results:
        results.append(_unresolved("star.superlevels", CheckName.STAR, "no completed 2D solve"))
    return results


# ----------------------------------------------------------------------
# spectrum
# ----------------------------------------------------------------------

def _spectrum_rows(
    scope: str, p: float, lam: float, report: SpectrumReport
) -> List[Dict[str, Any]]:
    mode = "" if report.mode is None else report.mode
    return [
        {"scope": scope, "p": p, "lambda": lam, "mode": mode, "index": i, "eigenvalue": value}
        for i, value in enumerate(report.eigenvalues)
    ]


def _spectrum_claims(
    scope: str,
    ps: Sequence[float],
    negatives: Sequence[int],
    smallest: Sequence[float],
    nondegenerate: Sequence[bool],
    floor: float,
) -> List[ClaimResult]:
    wrong = [p for p, n in zip(ps, negatives) if n != 1]
    index_claim = _verdict(
        f"{scope}:spectrum.morse_index", CheckName.SPECTRUM, not wrong,
        measured=float(max(negatives)), threshold=1.0,
        detail=f"negative counts {list(negatives)} at p={list(ps)}",
    )
    steady, ratio = _no_trend_to_zero(smallest, floor)
    degenerate = [p for p, ok in zip(ps, nondegenerate) if not ok]
    detail = f"min |eigenvalue| {[float(f'{v:.6g}') for v in smallest]}"
    if degenerate:
        detail += f"; below gap at p={degenerate}"
    gap_claim = _verdict(
        f"{scope}:spectrum.nondegenerate", CheckName.SPECTRUM, steady and not degenerate,
        measured=ratio if ratio is not None else min(smallest),
        threshold=floor if ratio is not None else None,
        detail=detail,
    )
    return [index_claim, gap_claim]


def check_spectrum(ctx: CheckContext) -> List[ClaimResult]:
    floor = ctx.config.tolerances.trend_floor
    results, rows = [], []
    for cell in ctx.solved_cells():
        spectra = []
        for report in cell.reports:
            spectrum = linearized_spectrum(report)
            rows.extend(_spectrum_rows(cell.label, report.p, report.lam, spectrum))
            spectra.append(spectrum)
        results.extend(_spectrum_claims(
            cell.label,
            [r.p for r in cell.reports],
            [s.negative_count for s in spectra],
            [s.min_abs_eigenvalue for s in spectra],
            [s.nondegenerate_ok for s in spectra],
            floor,
        ))

    for lam in ctx.config.lambda_values:
        scope = f"oracle_lam{lam:g}"
        ps, negatives, smallest, nondegenerate = [], [], [], []
        for p in ctx.config.oracle_schedule:
            modes = radial_linearized_modes(ctx.oracle(p, lam))
            for report in modes:
                rows.extend(_spectrum_rows(scope, p, lam, report))
            ps.append(p)
            negatives.append(morse_index(modes))
            smallest.append(min(report.min_abs_eigenvalue for report in modes))
            nondegenerate.append(all(report.nondegenerate_ok for report in modes))
        results.extend(_spectrum_claims(scope, ps, negatives, smallest, nondegenerate, floor))

    write_rows(ctx.path(CheckName.SPECTRUM, "eigenvalues.csv"), rows, SPECTRUM_COLUMNS)
    return results


# ----------------------------------------------------------------------
# robin
# ----------------------------------------------------------------------

def check_robin(ctx: CheckContext) -> List[ClaimResult]:
    config = ctx.config
    tol = config.tolerances
    spacing = config.robin_spacing or 2.0 * config.mesh_h
    results = []
    for spec in config.domain_specs():
        scope = spec.label()
        mesh = cached_build_mesh(spec, config.mesh_h)
        robin = robin_function(mesh, robin_sample_grid(mesh, spacing))
        write_rows(ctx.path(CheckName.ROBIN, f"{scope}.csv"), robin.rows(), ROBIN_COLUMNS)
        critical = np.asarray(robin.critical_point)

        cell = next((c for c in ctx.solved_cells()
                     if c.domain.to_dict() == spec.to_dict() and c.lam == 0.0), None)
        claim = f"{scope}:robin.max_point"
        if cell is None:
            results.append(_unresolved(claim, CheckName.ROBIN, "no completed solve at lambda=0"))
        else:
            report = cell.reports[-1]
            distance = float(np.hypot(*(np.asarray(report.max_point) - critical)))
            limit = tol.robin_distance * mesh.h_max
            results.append(_verdict(
                claim, CheckName.ROBIN, distance <= limit, measured=distance, threshold=limit,
                detail=f"p={report.p:g}, x_p={report.max_point}, "
                       f"critical point {robin.critical_point}",
            ))

        if spec.kind is DomainKind.DISK:
            offset = float(np.hypot(*(critical - np.asarray(spec.center))))
            results.append(_verdict(
                f"{scope}:robin.disk_center", CheckName.ROBIN, offset <= tol.robin_center,
                measured=offset, threshold=tol.robin_center,
            ))
            expected = math.log(spec.radius) / (2.0 * math.pi)
            gap = abs(robin.critical_value - expected)
            results.append(_verdict(
                f"{scope}:robin.disk_value", CheckName.ROBIN, gap <= tol.robin_center,
                measured=gap, threshold=tol.robin_center,
                detail=f"R(center)={float(robin.critical_value)!r}, exact {float(expected)!r}",
            ))
    return results


# ----------------------------------------------------------------------
# moser
# ----------------------------------------------------------------------

def _inradius(spec: DomainSpec) -> float:
    return float(spec.distance_to_boundary(np.asarray([spec.center], dtype=float))[0])


def check_moser(ctx: CheckContext) -> List[ClaimResult]:
    config = ctx.config
    results, rows = [], []
    for spec in config.domain_specs():
        radius = _inradius(spec)
        scope = spec.label()
        worst = -math.inf
        for lam in config.lambda_values:
            for p in config.oracle_schedule:
                d = moser_optimal_d(radius, p)
                bound = moser_bound(radius, d, p, lam).quotient_bound
                exact = moser_quotient(radius, d, p, lam)
                rows.append({
                    "scope": scope, "p": p, "lambda": lam, "radius": radius, "d": d,
                    "quotient": exact, "quotient_bound": bound,
                })
                worst = max(worst, exact / bound)
        results.append(_verdict(
            f"{scope}:moser.inner_disk_bound", CheckName.MOSER, worst <= 1.0 + 1e-12,
            measured=worst, threshold=1.0, detail="max J(m_d)^(1/2) over its inner-disk bound",
        ))

    radius = config.oracle_radius
    worst = -math.inf
    for lam in config.lambda_values:
        for p in config.oracle_schedule:
            sol = ctx.oracle(p, lam)
            exact = moser_quotient(radius, moser_optimal_d(radius, p), p, lam)
            worst = max(worst, math.sqrt(sol.c_squared) / exact)
    results.append(_verdict(
        "oracle:moser.c_upper", CheckName.MOSER, worst <= 1.0,
        measured=worst, threshold=1.0, detail="max c over J(m_d)^(1/2) on the oracle disk",
    ))
    write_rows(ctx.path(CheckName.MOSER, "moser.csv"), rows, MOSER_COLUMNS)
    return results


# ----------------------------------------------------------------------
# limit_kernel
# ----------------------------------------------------------------------

def check_limit_kernel(ctx: CheckContext) -> List[ClaimResult]:
    tol = ctx.config.tolerances
    results = []
    for k in (0, 1):
        residual = mode_operator_residual(sample_kernel(k, step=KERNEL_STEP, r_max=KERNEL_RADIUS))
        results.append(_verdict(
            f"kernel.zeta{k}_residual", CheckName.LIMIT_KERNEL, residual <= tol.kernel_residual,
            measured=residual, threshold=tol.kernel_residual,
        ))

    rows, mismatched = [], []
    for k, expected in enumerate(EXPECTED_VERDICTS):
        shot = mode_shoot(k)
        rows.append({
            "k": k,
            "verdict": shot.verdict.value,
            "expected": expected.value,
            "near_max": shot.near_max,
            "far_max": shot.far_max,
            "second_growth_rate": shot.second_growth_rate,
        })
        if shot.verdict is not expected:
            mismatched.append(k)
    write_rows(ctx.path(CheckName.LIMIT_KERNEL, "modes.csv"), rows, KERNEL_COLUMNS)
    results.append(_verdict(
        "kernel.growth_verdicts", CheckName.LIMIT_KERNEL, not mismatched,
        measured=float(len(mismatched)), threshold=0.0,
        detail=f"unexpected verdict for k={mismatched}" if mismatched else "",
    ))

    bubble = Bubble.limit_profile()
    mass_error = abs(bubble.mass(math.inf) - BUBBLE_TOTAL_MASS) / BUBBLE_TOTAL_MASS
    results.append(_verdict(
        "kernel.bubble_mass", CheckName.LIMIT_KERNEL, mass_error <= tol.bubble_mass,
        measured=mass_error, threshold=tol.bubble_mass,
    ))
    origin = float(bubble.radial(0.0))
    results.append(_verdict(
        "kernel.bubble_origin", CheckName.LIMIT_KERNEL, origin == 0.0,
        measured=origin, threshold=0.0,
    ))

    p = ctx.config.oracle_schedule[-1]
    lam = ctx.config.lambda_values[0]
    claim = "oracle:kernel.translation_overlap"
    if p < KERNEL_MIN_P:
        results.append(_unresolved(
            claim, CheckName.LIMIT_KERNEL, f"needs an oracle p >= {KERNEL_MIN_P:g}"
        ))
    else:
        sol = ctx.oracle(p, lam)
        overlap = kernel_overlap(sol, radial_linearized_modes(sol)[1])
        results.append(_verdict(
            claim, CheckName.LIMIT_KERNEL, overlap >= tol.kernel_overlap,
            measured=overlap, threshold=tol.kernel_overlap, detail=f"p={p:g}, lambda={lam:g}",
        ))
    return results


# ----------------------------------------------------------------------
# oracle_compare
# ----------------------------------------------------------------------

def _oracle_row(scope: str, report: SolveReport, sol: RadialSolution) -> Dict[str, Any]:
    return {
        "scope": scope,
        "p": report.p,
        "lambda": report.lam,
        "h_max": report.mesh.h_max,
        "fem_sup_norm": report.sup_norm,
        "oracle_sup_norm": sol.amplitude,
        "sup_rel_error": _relative(report.sup_norm, sol.amplitude),
        "fem_c_squared": report.c_squared,
        "oracle_c_squared": sol.c_squared,
        "c_squared_rel_error": _relative(report.c_squared, sol.c_squared),
    }


def observed_orders(errors: Sequence[float], ratio: float = 2.0) -> List[float]:
    """log(e_k / e_{k+1}) / log(ratio) for consecutive refinements."""
    floor = 1e-300
    return [
        math.log(max(a, floor) / max(b, floor)) / math.log(ratio)
        for a, b in zip(errors, errors[1:])
    ]


def _refinement_study(
    ctx: CheckContext, cell: CellResult
) -> Tuple[List[Dict[str, Any]], List[ClaimResult]]:
    """Uniform meshes h, h/2, ... at the first configured exponent, against the oracle."""
    config = ctx.config
    p = cell.reports[0].p
    sol = ctx.oracle(p, cell.lam, cell.domain.radius)
    params = ProblemParams(lam=cell.lam, p=p)
    rows = []
    for level in range(config.refinement_levels + 1):
        mesh = cached_build_mesh(cell.domain, config.mesh_h / 2 ** level)
        report = continue_in_p(params, mesh, default_schedule(p), tol=config.solver_tol)[-1]
        rows.append(_oracle_row(cell.label, report, sol))
    orders = observed_orders([row["sup_rel_error"] for row in rows])
    threshold = config.tolerances.convergence_order
    claim = _verdict(
        f"{cell.label}:oracle.convergence_order", CheckName.ORACLE_COMPARE,
        bool(orders) and min(orders) >= threshold,
        measured=min(orders) if orders else None, threshold=threshold,
        detail=f"p={p:g}, orders {[round(o, 3) for o in orders]}",
    )
    return [{key: row[key] for key in REFINEMENT_COLUMNS} for row in rows], [claim]


def check_oracle_compare(ctx: CheckContext) -> List[ClaimResult]:
    tol = ctx.config.tolerances.oracle_compare
    results, rows, refinement = [], [], []
    for cell in ctx.solved_cells():
        if cell.domain.kind is not DomainKind.DISK:
            continue
        for report in cell.reports:
            sol = ctx.oracle(report.p, report.lam, cell.domain.radius)
            row = _oracle_row(cell.label, report, sol)
            rows.append(row)
            worst = max(row["sup_rel_error"], row["c_squared_rel_error"])
            results.append(_verdict(
                f"{cell.label}:oracle.p{report.p:g}", CheckName.ORACLE_COMPARE, worst <= tol,
                measured=worst, threshold=tol,
                detail=f"sup-norm {row['sup_rel_error']:.3e}, c^2 {row['c_squared_rel_error']:.3e}",
            ))
        if ctx.config.refinement_levels >= 2:
            study_rows, claims = _refinement_study(ctx, cell)
            refinement.extend(study_rows)
            results.extend(claims)

    if not results:
        results.append(_unresolved("oracle.compare", CheckName.ORACLE_COMPARE,
                                   "no completed solve on a disk domain"))
    write_rows(ctx.path(CheckName.ORACLE_COMPARE, "oracle_compare.csv"), rows, ORACLE_COLUMNS)
    if refinement:
        write_rows(ctx.path(CheckName.ORACLE_COMPARE, "refinement.csv"), refinement,
                   REFINEMENT_COLUMNS)
    return results


# Check registry, in the order checks run and appear in the summary
CHECK_CONFIGS: List[Dict[str, Any]] = [
    {
        "name": CheckName.BOUNDS,
        "description": "sup-norm bounds, energy scalings and the Sobolev ratio along p",
        "needs_solves": True,
        "run": check_bounds,
    },
    {
        "name": CheckName.PROFILE,
        "description": "rescaled profile against the limit bubble, 2D and oracle",
        "needs_solves": True,
        "run": check_profile,
    },
    {
        "name": CheckName.STAR,
        "description": "star-shaped superlevel sets about the maximum point",
        "needs_solves": True,
        "run": check_star,
    },
    {
        "name": CheckName.SPECTRUM,
        "description": "Morse index one and nondegeneracy of the linearization",
        "needs_solves": True,
        "run": check_spectrum,
    },
    {
        "name": CheckName.ROBIN,
        "description": "maximum point against the Robin-function critical point (lambda = 0)",
        "needs_solves": True,
        "run": check_robin,
    },
    {
        "name": CheckName.MOSER,
        "description": "Moser-function upper bounds on c",
        "needs_solves": False,
        "run": check_moser,
    },
    {
        "name": CheckName.LIMIT_KERNEL,
        "description": "kernel of the linearized Liouville operator and bubble identities",
        "needs_solves": False,
        "run": check_limit_kernel,
    },
    {
        "name": CheckName.ORACLE_COMPARE,
        "description": "FEM solves on the disk against radial shooting",
        "needs_solves": True,
        "run": check_oracle_compare,
    },
]

CHECKS_BY_NAME: Dict[CheckName, Dict[str, Any]] = {entry["name"]: entry for entry in CHECK_CONFIGS}
