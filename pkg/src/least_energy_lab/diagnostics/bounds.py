"""
Quantitative bounds along a sweep in p: sup-norm bounds, energy scalings
p·c², p·∫u^{p+1}, the Sobolev-constant ratio and the Moser upper bound.
"""
import logging
import math
import statistics
from collections import defaultdict
from typing import Dict, List, Sequence

import numpy as np

from ..limit_theory.moser import moser_c_squared_p_bound
from ..radial_oracle.bessel import amplitude_lower_bound
from ..radial_oracle.shooting import RadialSolution
from ..shared_libraries import constants
from ..shared_libraries.models import BoundsRow, CheckName, CheckStatus, ClaimResult
from ..solver.field import first_dirichlet_eigenvalue
from ..solver.minimize import SolveReport

logger = logging.getLogger(__name__)

# Suite windows for the scaling claims
GROWTH_WINDOW = 1.2
# Bounds that only hold in the large-p regime are checked from here on
MIN_SCALING_P = 10.0
SOBOLEV_MIN_P = 50.0
SOBOLEV_THRESHOLD = 1.5 * constants.SOBOLEV_LIMIT
SUP_NORM_WINDOW = (1.0, 2.5)
# Lower threshold for sup_norm^(p-1) from this exponent on
SUP_NORM_POW_MIN_P = 100.0
SUP_NORM_POW_THRESHOLD = 1e10


def _power(base: float, exponent: float) -> float:
    try:
        return math.exp(exponent * math.log(base))
    except OverflowError:
        return math.inf


def _inradius(report: SolveReport) -> float:
    mesh = report.mesh
    center = np.asarray(mesh.spec.center) if mesh.spec is not None else mesh.vertices.mean(axis=0)
    return float(mesh.distance_to_boundary(center[None, :])[0])


def bounds_row(report: SolveReport) -> BoundsRow:
    p, lam = report.p, report.lam
    terms = report.energy_terms
    lambda1 = first_dirichlet_eigenvalue(report.mesh)
    return BoundsRow(
        p=p,
        lam=lam,
        sup_norm=report.sup_norm,
        sup_norm_pow=_power(report.sup_norm, p - 1.0),
        c_squared=report.c_squared,
        c_squared_p=report.c_squared * p,
        p_int_u_p1=p * terms["int_u_p1"],
        p_energy=p * (terms["grad_sq"] + terms["l2_sq"]),
        sobolev_ratio=terms["int_u_p"] ** (1.0 / p) / (math.sqrt(p) * math.sqrt(terms["grad_sq"])),
        lower_bound=_power(lam + lambda1, 1.0 / (p - 1.0)),
        moser_bound=moser_c_squared_p_bound(_inradius(report), p, lam),
        max_point_boundary_distance=report.max_point_boundary_distance,
    )


def oracle_bounds_row(sol: RadialSolution) -> BoundsRow:
    """The same row computed from a radial solution on the disk."""
    terms = sol.integrals
    return BoundsRow(
        p=sol.p,
        lam=sol.lam,
        sup_norm=sol.amplitude,
        sup_norm_pow=sol.sup_norm_pow,
        c_squared=sol.c_squared,
        c_squared_p=sol.c_squared * sol.p,
        p_int_u_p1=sol.p * terms["int_u_p1"],
        p_energy=sol.p * (terms["grad_sq"] + terms["l2_sq"]),
        sobolev_ratio=sol.sobolev_ratio,
        lower_bound=amplitude_lower_bound(sol.p, sol.lam, sol.disk_radius),
        moser_bound=moser_c_squared_p_bound(sol.disk_radius, sol.p, sol.lam),
        max_point_boundary_distance=sol.disk_radius,
    )


def bounds_report(reports: Sequence[SolveReport]) -> List[BoundsRow]:
    """One BoundsRow per solve, in the given order."""
    if not reports:
        raise ValueError("bounds report needs at least one solve")
    return [bounds_row(report) for report in reports]


def _by_lambda(rows: Sequence[BoundsRow]) -> Dict[float, List[BoundsRow]]:
    groups: Dict[float, List[BoundsRow]] = defaultdict(list)
    for row in rows:
        groups[row.lam].append(row)
    return {lam: sorted(group, key=lambda r: r.p) for lam, group in sorted(groups.items())}


def _window_claim(claim: str, groups: Dict[float, List[BoundsRow]], attribute: str) -> ClaimResult:
    worst = None
    for group in groups.values():
        values = [getattr(row, attribute) for row in group if row.p >= MIN_SCALING_P]
        if len(values) < 2:
            continue
        ratio = values[-1] / statistics.median(values)
        worst = ratio if worst is None else max(worst, ratio)
    if worst is None:
        return ClaimResult(claim, CheckName.BOUNDS, CheckStatus.UNRESOLVED,
                           detail=f"needs two exponents >= {MIN_SCALING_P:g}")
    status = CheckStatus.PASS if worst <= GROWTH_WINDOW else CheckStatus.FAIL
    return ClaimResult(claim, CheckName.BOUNDS, status, measured=worst, threshold=GROWTH_WINDOW,
                       detail="last value over median")


def evaluate_bounds(rows: Sequence[BoundsRow], keep_unreached: bool = True) -> List[ClaimResult]:
    """
    Verdicts for the bound claims, grouped per λ and ordered in p.

    A claim whose exponent range no row reaches is UNRESOLVED, or left out
    when ``keep_unreached`` is False.
    """
    groups = _by_lambda(rows)
    results = []

    margin = min(row.sup_norm - row.lower_bound for row in rows)
    results.append(ClaimResult(
        "bounds.sup_norm_lower", CheckName.BOUNDS,
        CheckStatus.PASS if margin >= 0 else CheckStatus.FAIL,
        measured=margin, threshold=0.0, detail="min of sup_norm - (lambda+lambda1)^(1/(p-1))",
    ))

    low, high = SUP_NORM_WINDOW
    large = [row for row in rows if row.p >= MIN_SCALING_P]
    if large:
        outside = [row.p for row in large if not low <= row.sup_norm <= high]
        results.append(ClaimResult(
            "bounds.sup_norm_window", CheckName.BOUNDS,
            CheckStatus.FAIL if outside else CheckStatus.PASS,
            measured=max(row.sup_norm for row in large), threshold=high,
            detail=f"sup_norm outside [{low:g}, {high:g}] at p={outside}" if outside else "",
        ))
    else:
        results.append(ClaimResult(
            "bounds.sup_norm_window", CheckName.BOUNDS, CheckStatus.UNRESOLVED,
            detail=f"no solve with p >= {MIN_SCALING_P:g}",
        ))

    increasing = [
        all(b.sup_norm_pow > a.sup_norm_pow for a, b in zip(group, group[1:]))
        for group in groups.values() if len(group) >= 2
    ]
    if increasing:
        status = CheckStatus.PASS if all(increasing) else CheckStatus.FAIL
    else:
        status = CheckStatus.UNRESOLVED
    results.append(ClaimResult(
        "bounds.sup_norm_pow_increasing", CheckName.BOUNDS, status,
        measured=max(row.sup_norm_pow for row in rows), detail="sup_norm^(p-1) along p",
    ))

    huge = [row for row in rows if row.p >= SUP_NORM_POW_MIN_P]
    if huge:
        smallest = min(row.sup_norm_pow for row in huge)
        results.append(ClaimResult(
            "bounds.sup_norm_pow_magnitude", CheckName.BOUNDS,
            CheckStatus.PASS if smallest > SUP_NORM_POW_THRESHOLD else CheckStatus.FAIL,
            measured=smallest, threshold=SUP_NORM_POW_THRESHOLD,
            detail=f"min of sup_norm^(p-1) over p >= {SUP_NORM_POW_MIN_P:g}",
        ))
    else:
        results.append(ClaimResult(
            "bounds.sup_norm_pow_magnitude", CheckName.BOUNDS, CheckStatus.UNRESOLVED,
            detail=f"no solve with p >= {SUP_NORM_POW_MIN_P:g}",
        ))

    results.append(_window_claim("bounds.c_squared_p_window", groups, "c_squared_p"))
    results.append(_window_claim("bounds.p_int_u_p1_window", groups, "p_int_u_p1"))

    moser_rows = [row for row in rows if row.p >= MIN_SCALING_P and row.moser_bound is not None]
    if moser_rows:
        worst = max(row.c_squared_p / row.moser_bound for row in moser_rows)
        results.append(ClaimResult(
            "bounds.moser", CheckName.BOUNDS,
            CheckStatus.PASS if worst <= 1.0 else CheckStatus.FAIL,
            measured=worst, threshold=1.0, detail="max of p*c^2 over the Moser bound",
        ))
    else:
        results.append(ClaimResult("bounds.moser", CheckName.BOUNDS, CheckStatus.UNRESOLVED,
                                   detail=f"no solve with p >= {MIN_SCALING_P:g}"))

    sobolev_rows = [row for row in rows if row.p >= SOBOLEV_MIN_P]
    if sobolev_rows:
        worst = max(row.sobolev_ratio for row in sobolev_rows)
        results.append(ClaimResult(
            "bounds.sobolev_ratio", CheckName.BOUNDS,
            CheckStatus.PASS if worst <= SOBOLEV_THRESHOLD else CheckStatus.FAIL,
            measured=worst, threshold=SOBOLEV_THRESHOLD,
        ))
    else:
        results.append(ClaimResult("bounds.sobolev_ratio", CheckName.BOUNDS, CheckStatus.UNRESOLVED,
                                   detail=f"no solve with p >= {SOBOLEV_MIN_P:g}"))

    if not keep_unreached:
        results = [result for result in results if result.status is not CheckStatus.UNRESOLVED]
    for result in results:
        logger.debug(f"{result.claim}: {result.status.value} ({result.measured})")
    return results
