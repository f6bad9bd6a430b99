"""
Least-energy solutions by constrained minimization of J_λ.

minimize() runs a Sobolev-preconditioned projected gradient descent on
{v ≥ 0, ∫v^{p+1} = 1} with Barzilai-Borwein steps, then polishes the
rescaled minimizer u = J(v)^{1/(p-1)}·v with damped Newton on
A u = m∘u^p. continue_in_p() tracks the branch along an increasing
schedule of exponents, regrading the mesh when the concentration scale
outruns the local mesh size.
"""
import logging
import math
import time
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..linalg.solvers import factorize
from ..mesh.triangulation import Mesh, grading_for, refine
from ..shared_libraries import constants
from ..shared_libraries.errors import ContinuationError, ConvergenceError, LabError, StagnationError
from ..shared_libraries.logging_config import StructuredLogger
from ..shared_libraries.models import Point, ProblemParams
from .energy import EnergyFunctional, epsilon_of, positive_power
from .field import Field, first_eigenfunction, transfer_field

logger = logging.getLogger(__name__)
structured = StructuredLogger(logger)

# Relative Sobolev-gradient norm at which the gradient phase hands over to Newton
GRADIENT_PHASE_TOL = 1e-4
# Hand over anyway if the step budget runs out below this
GRADIENT_FALLBACK_TOL = 1e-2
ARMIJO = 1e-4
NONMONOTONE_MEMORY = 10
MAX_BACKTRACKS = 40
STEP_BOUNDS = (1e-6, 1e3)
# Initial fields mirror-symmetric to this relative level are kept exactly symmetric
SYMMETRY_TOL = 1e-8


@dataclass(frozen=True)
class SolveReport:
    """One least-energy solve at (λ, p)."""
    solution: Field
    params: ProblemParams
    c_squared: float
    pde_residual: float
    iterations: int
    p_path: List[float]
    max_point: Point
    sup_norm: float
    energy_terms: Dict[str, float] = field(default_factory=dict)
    max_point_boundary_distance: Optional[float] = None
    max_point_drift: Optional[float] = None
    gradient_steps: int = 0
    newton_steps: int = 0
    duration_seconds: float = 0.0

    def __post_init__(self):
        if not self.c_squared > 0:
            raise ValueError(f"c_squared must be positive, got {self.c_squared}")

    @property
    def mesh(self) -> Mesh:
        return self.solution.mesh

    @property
    def p(self) -> float:
        return self.params.p

    @property
    def lam(self) -> float:
        return self.params.lam

    @property
    def epsilon(self) -> float:
        return epsilon_of(self.sup_norm, self.params.p)

    def with_drift(self, drift: Optional[float], p_path: Sequence[float]) -> "SolveReport":
        return replace(self, max_point_drift=drift, p_path=list(p_path))


class _Minimizer:
    """State of one projected-gradient run on the constraint surface."""

    def __init__(
        self, functional: EnergyFunctional, p: float, mirrors: Sequence[np.ndarray] = ()
    ):
        self.functional = functional
        self.p = p
        self.mirrors = tuple(mirrors)
        self.A = functional.operator.matrix
        self.weights = functional.weights
        self.lu = factorize(functional.operator)

    def symmetrize(self, v: np.ndarray) -> np.ndarray:
        # exact under both reflections since they commute
        for perm in self.mirrors:
            v = 0.5 * (v + v[perm])
        return v

    def normalize(self, v: np.ndarray) -> np.ndarray:
        v = np.abs(self.symmetrize(v))
        return v / self.functional.constraint_integral(v, self.p) ** (1.0 / (self.p + 1.0))

    def value(self, v: np.ndarray) -> float:
        # on the constraint surface the quotient is the A-energy
        return float(v @ (self.A @ v))

    def sobolev_gradient(self, v: np.ndarray, J: float) -> np.ndarray:
        return v - J * self.lu.solve(self.weights * positive_power(v, self.p, self.p))

    def a_inner(self, x: np.ndarray, y: np.ndarray) -> float:
        return float(x @ (self.A @ y))

    def run(self, v: np.ndarray, max_steps: int, window: int):
        v = self.normalize(v)
        J = self.value(v)
        G = self.sobolev_gradient(v, J)
        grad_norm = math.sqrt(max(self.a_inner(G, G), 0.0) / J)
        history = [J]
        step = 1.0
        stalled = 0
        steps = 0
        while grad_norm > GRADIENT_PHASE_TOL and steps < max_steps:
            reference = max(history[-NONMONOTONE_MEMORY:])
            g_sq = self.a_inner(G, G)
            tau = step
            for _ in range(MAX_BACKTRACKS):
                candidate = self.normalize(v - tau * G)
                J_new = self.value(candidate)
                if J_new <= reference - ARMIJO * 2.0 * tau * g_sq:
                    break
                tau *= 0.5
            else:
                candidate, J_new = v, J
            G_new = self.sobolev_gradient(candidate, J_new)
            s = candidate - v
            y = G_new - G
            sy = self.a_inner(s, y)
            step = 1.0
            if sy > 0:
                step = min(max(self.a_inner(s, s) / sy, STEP_BOUNDS[0]), STEP_BOUNDS[1])
            stalled = stalled + 1 if (J - J_new) < 1e-14 * J else 0
            v, J, G = candidate, J_new, G_new
            grad_norm = math.sqrt(max(self.a_inner(G, G), 0.0) / J)
            history.append(J)
            steps += 1
            if stalled >= window:
                raise StagnationError(
                    f"quotient stopped decreasing for {window} steps "
                    f"at gradient norm {grad_norm:.3e}",
                    last_residual=grad_norm,
                    last_iterate=v,
                )
        return v, J, grad_norm, steps

    def dual_residual(self, u: np.ndarray) -> float:
        r = self.functional.pde_defect(u, self.p)
        energy = self.a_inner(u, u)
        return math.sqrt(max(float(r @ self.lu.solve(r)), 0.0) / energy)

    def newton(self, u: np.ndarray, tol: float, max_steps: int):
        residual = self.dual_residual(u)
        steps = 0
        functional = self.functional
        while residual > tol and steps < max_steps:
            jacobian = functional.operator.add_diagonal(
                -self.p * self.weights * positive_power(u, self.p - 1.0, self.p)
            )
            delta = self.symmetrize(
                factorize(jacobian).solve(-functional.pde_defect(u, self.p))
            )
            t = 1.0
            while t > 1e-4:
                trial = u + t * delta
                if np.all(trial > 0):
                    trial_residual = self.dual_residual(trial)
                    if trial_residual < residual:
                        break
                t *= 0.5
            else:
                raise ConvergenceError(
                    f"Newton line search failed at residual {residual:.3e}", last_residual=residual
                )
            u, residual = trial, trial_residual
            steps += 1
        if residual > tol:
            raise ConvergenceError(
                f"Newton stopped at residual {residual:.3e} after {steps} steps (target {tol:.1e})",
                last_residual=residual,
            )
        return u, residual, steps


def minimize(
    params: ProblemParams,
    mesh: Mesh,
    init: Optional[Field] = None,
    tol: Optional[float] = None,
    max_steps: Optional[int] = None,
) -> SolveReport:
    """
    Least-energy solution of -Δu + λu = u^p on ``mesh``.

    Args:
        params: (λ, p) with p > 1
        mesh: Triangulation of the domain
        init: Nonzero starting field (first Dirichlet eigenfunction by default)
        tol: Target for the PDE residual in the dual energy norm

    Returns:
        SolveReport with u solving the discrete PDE and c_squared = J_λ(u)

    Raises:
        ValueError: zero init
        StagnationError: the quotient stalls before the gradient tolerance
        ConvergenceError: the Newton polish fails
        PowerOverflowError: u^p overflows outside log-domain mode
    """
    tol = constants.SOLVER_TOL if tol is None else tol
    max_steps = constants.MAX_GRADIENT_STEPS if max_steps is None else max_steps
    init = first_eigenfunction(mesh) if init is None else transfer_field(init, mesh)
    if init.is_zero():
        raise ValueError("initial field is identically zero")

    started = time.perf_counter()
    functional = EnergyFunctional(mesh, params.lam)
    structured.log_solve_started(params.p, params.lam, functional.dofs)
    solver = _Minimizer(functional, params.p, _mirrors_of(init))

    v, J, grad_norm, gradient_steps = solver.run(
        init.interior_values, max_steps, constants.STAGNATION_WINDOW
    )
    if grad_norm > GRADIENT_FALLBACK_TOL:
        raise StagnationError(
            f"gradient phase used {gradient_steps} steps, gradient norm still {grad_norm:.3e}",
            last_residual=grad_norm,
            last_iterate=v,
        )

    u = J ** (1.0 / (params.p - 1.0)) * v
    try:
        u, residual, newton_steps = solver.newton(u, tol, constants.MAX_NEWTON_STEPS)
    except ConvergenceError as e:
        raise StagnationError(str(e), last_residual=e.last_residual, last_iterate=v) from e

    solution = Field.from_interior(mesh, u)
    if np.any(solution.interior_values <= 0):
        raise ConvergenceError("solution lost positivity", last_residual=residual)
    c_squared = functional.quotient(solution, params.p)
    max_point = solution.max_point
    distance = float(mesh.distance_to_boundary(np.asarray([max_point]))[0])
    duration = time.perf_counter() - started
    structured.log_solve_completed(
        params.p, params.lam, gradient_steps + newton_steps, residual, duration
    )
    return SolveReport(
        solution=solution,
        params=params,
        c_squared=c_squared,
        pde_residual=residual,
        iterations=gradient_steps + newton_steps,
        p_path=[params.p],
        max_point=max_point,
        sup_norm=solution.sup_norm,
        energy_terms=functional.energy_terms(solution, params.p),
        max_point_boundary_distance=distance,
        gradient_steps=gradient_steps,
        newton_steps=newton_steps,
        duration_seconds=duration,
    )


def _mirrors_of(init: Field) -> Tuple[np.ndarray, ...]:
    """Interior mirror maps under which ``init`` is symmetric, empty otherwise."""
    mirrors = init.mesh.interior_mirrors
    values = init.interior_values
    scale = float(np.max(np.abs(values)))
    if not mirrors or any(
        np.max(np.abs(values - values[perm])) > SYMMETRY_TOL * scale for perm in mirrors
    ):
        return ()
    return mirrors


def default_schedule(
    p_target: float, start: Optional[float] = None, ratio: Optional[float] = None
) -> List[float]:
    """Geometric schedule start, start·ratio, ... ending exactly at p_target."""
    start = constants.CONTINUATION_START if start is None else start
    ratio = constants.CONTINUATION_RATIO if ratio is None else ratio
    if p_target <= start:
        return [float(p_target)]
    schedule = [float(start)]
    while schedule[-1] * ratio < p_target:
        schedule.append(schedule[-1] * ratio)
    schedule.append(float(p_target))
    return schedule


def continue_in_p(
    params_target: ProblemParams,
    mesh: Mesh,
    schedule: Optional[Sequence[float]] = None,
    tol: Optional[float] = None,
    remesh: bool = False,
    init: Optional[Field] = None,
) -> List[SolveReport]:
    """
    Solve along an increasing schedule of exponents, warm-starting each stage.

    With ``remesh`` the mesh is regraded about the previous maximum point
    whenever the predicted concentration scale at the next exponent falls
    below LEL_WINDOW_RESOLUTION_FACTOR local mesh sizes.

    Raises:
        ValueError: schedule not increasing, not ending at the target, or starting above 5
        ContinuationError: a stage failed; ``completed`` holds the earlier reports
    """
    if schedule is None:
        schedule = default_schedule(params_target.p)
    schedule = [float(p) for p in schedule]
    if not schedule or any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError(f"schedule must be strictly increasing, got {schedule}")
    if schedule[-1] != params_target.p:
        raise ValueError(f"schedule must end at p={params_target.p}, got {schedule[-1]}")
    if schedule[0] > 5:
        raise ValueError(f"schedule must start at p <= 5, got {schedule[0]}")

    base_h = mesh.h_max
    reports: List[SolveReport] = []
    current_mesh = mesh
    guess = init
    for p in schedule:
        params = params_target.with_p(p)
        try:
            if remesh and reports:
                current_mesh = _regrade_for(reports[-1], p, current_mesh, base_h)
            report = minimize(params, current_mesh, init=guess, tol=tol)
        except (LabError, ValueError) as e:
            structured.log_stage_failed("continue_in_p", e, p=p, lam=params.lam)
            raise ContinuationError(
                f"continuation failed at p={p:g}: {e}", stage=p, completed=reports
            ) from e
        drift = None
        if reports:
            drift = math.dist(report.max_point, reports[-1].max_point)
        report = report.with_drift(drift, schedule[:len(reports) + 1])
        reports.append(report)
        guess = report.solution
    return reports


def _regrade_for(previous: SolveReport, p_next: float, mesh: Mesh, base_h: float) -> Mesh:
    predicted = epsilon_of(previous.sup_norm, p_next)
    focus = previous.max_point
    resolution = mesh.local_h(focus, predicted)
    if predicted >= constants.WINDOW_RESOLUTION_FACTOR * resolution:
        return mesh
    grading = grading_for(focus, predicted, outer_h=base_h)
    logger.info(
        f"Regrading for p={p_next:g}: predicted scale {predicted:.3e}, local h {resolution:.3e}"
    )
    return refine(mesh, grading)


def probe_branch_uniqueness(
    params: ProblemParams,
    mesh: Mesh,
    trials: int = 4,
    seed: int = 0,
    tol: Optional[float] = None,
) -> Dict[str, float]:
    """
    Minimize from random positive initial fields and report the spread of c².

    The least-energy solution is not known to be unique, so this reports
    rather than asserts.
    """
    rng = np.random.default_rng(seed)
    base = first_eigenfunction(mesh)
    values = []
    for _ in range(trials):
        noise = rng.uniform(0.1, 1.0, size=mesh.n_vertices)
        noise[mesh.boundary_mask] = 0.0
        report = minimize(params, mesh, init=Field(mesh, base.values * noise), tol=tol)
        values.append(report.c_squared)
    values = np.asarray(values)
    return {
        "trials": float(trials),
        "c_squared_min": float(values.min()),
        "c_squared_max": float(values.max()),
        "relative_spread": float((values.max() - values.min()) / values.min()),
    }
