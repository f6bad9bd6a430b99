"""
Radial least-energy solutions on a disk by shooting.

With u(r) = a·w(κr), κ = a^{(p-1)/2}, the radial equation
u'' + u'/r = λu - u^p becomes

    w'' + w'/s = βw - w^p,   w(0) = 1, w'(0) = 0,   β = λ/a^{p-1},

and the disk radius is s₁/κ for the first zero s₁ of w. The scaled
profile is integrated in s on [0, 1] and in t = log s beyond, where
s₁ grows like a^{(p-1)/2}. Five running integrals travel with the
state so energies and masses need no separate quadrature.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from ..limit_theory.bubble import Bubble
from ..shared_libraries import constants
from ..shared_libraries.errors import BracketingError, IntegrationError
from ..shared_libraries.models import ConcentrationRecord, ProfileComparison
from .bessel import amplitude_lower_bound

logger = logging.getLogger(__name__)

SERIES_START = 1e-3
CORE_END = 1.0
# e^{2t} overflows past t ≈ 354
MAX_LOG_RADIUS = 300.0
ODE_RTOL = 1e-12
ODE_ATOL = 1e-14
SCAN_POINTS = 32
UPPER_AMPLITUDE = 10.0
LOWER_AMPLITUDE_FACTOR = 0.99
NO_ZERO_MISMATCH = 50.0
CORE_SAMPLES = 1001
OUTER_SAMPLES = 2001

INTEGRAL_NAMES = ("grad_sq", "l2_sq", "int_u_p1", "int_u_p", "int_u_pm1")


def _abs_power(w: float, exponent: float) -> float:
    """|w|^exponent through exp/log so large exponents never overflow."""
    if w == 0.0:
        return 0.0
    return math.exp(exponent * math.log(abs(w)))


def _event(fun, direction: float):
    fun.terminal = True
    fun.direction = direction
    return fun


class ScaledProfile:
    """
    Solution of w'' + w'/s = βw - w^p from w(0) = 1 up to its first zero.

    State rows of `evaluate`: w, w', then the running integrals
    ∫w'²s, ∫w²s, ∫w^{p+1}s, ∫w^p s, ∫w^{p-1}s from 0 to s.
    `first_zero` is None when w turns back up (or survives past
    t = MAX_LOG_RADIUS) before vanishing.
    """

    def __init__(self, p: float, beta: float):
        self.p = float(p)
        self.beta = float(beta)
        self.first_zero: Optional[float] = None
        self.core = None
        self.outer = None
        self.core_end = CORE_END
        self._integrate()

    def _series(self, s: np.ndarray) -> np.ndarray:
        c = (self.beta - 1.0) / 4.0
        out = np.empty((7, s.size))
        out[0] = 1.0 + c * s ** 2
        out[1] = 2.0 * c * s
        out[2] = c ** 2 * s ** 4
        out[3:] = 0.5 * s ** 2
        return out

    def _core_rhs(self, s, y):
        w, ws = y[0], y[1]
        wpm1 = _abs_power(w, self.p - 1.0)
        wp = w * wpm1
        return [
            ws, self.beta * w - wp - ws / s, ws * ws * s, w * w * s, wp * w * s, wp * s, wpm1 * s
        ]

    def _outer_rhs(self, t, y):
        w, z = y[0], y[1]
        s2 = math.exp(2.0 * t)
        wpm1 = _abs_power(w, self.p - 1.0)
        wp = w * wpm1
        return [z, s2 * (self.beta * w - wp), z * z, w * w * s2, wp * w * s2, wp * s2, wpm1 * s2]

    def _integrate(self) -> None:
        zero = _event(lambda _, y: y[0], -1.0)
        turn = _event(lambda _, y: y[1], 1.0)
        y0 = self._series(np.array([SERIES_START]))[:, 0]
        core = solve_ivp(
            self._core_rhs, (SERIES_START, CORE_END), y0, method="DOP853",
            rtol=ODE_RTOL, atol=ODE_ATOL, dense_output=True, events=(zero, turn),
        )
        if core.status == -1:
            raise IntegrationError(
                f"core integration failed: {core.message}", radius=float(core.t[-1])
            )
        self.core = core.sol
        if core.t_events[0].size:
            self.first_zero = float(core.t_events[0][0])
            self.core_end = self.first_zero
            return
        if core.t_events[1].size:
            self.core_end = float(core.t_events[1][0])
            return

        w1, ws1 = core.y[0, -1], core.y[1, -1]
        y1 = [w1, ws1 * CORE_END, *core.y[2:, -1]]
        outer = solve_ivp(
            self._outer_rhs, (math.log(CORE_END), MAX_LOG_RADIUS), y1, method="DOP853",
            rtol=ODE_RTOL, atol=ODE_ATOL, dense_output=True, events=(zero, turn),
        )
        if outer.status == -1:
            raise IntegrationError(
                f"outer integration failed: {outer.message}", radius=math.exp(outer.t[-1])
            )
        self.outer = outer.sol
        if outer.t_events[0].size:
            self.first_zero = math.exp(float(outer.t_events[0][0]))

    def evaluate(self, s) -> np.ndarray:
        s = np.atleast_1d(np.asarray(s, dtype=float))
        limit = self.first_zero if self.first_zero is not None else math.inf
        if np.any(s < 0) or np.any(s > limit * (1.0 + 1e-12)):
            raise ValueError(f"scaled radius outside [0, {limit:.6g}]")
        out = np.empty((7, s.size))
        series = s < SERIES_START
        core = ~series & (s <= self.core_end)
        outer = s > self.core_end
        if series.any():
            out[:, series] = self._series(s[series])
        if core.any():
            out[:, core] = self.core(s[core])
        if outer.any():
            if self.outer is None:
                raise ValueError(f"profile stops at s={self.core_end:.6g}")
            values = self.outer(np.log(s[outer]))
            values[1] /= s[outer]
            out[:, outer] = values
        return out

    @property
    def totals(self) -> np.ndarray:
        """Running integrals at the first zero."""
        if self.first_zero is None:
            raise ValueError("profile has no zero")
        return self.evaluate(self.first_zero)[2:, 0]


@dataclass
class RadialSolution:
    """Positive radial solution of -Δu + λu = u^p on the disk of radius disk_radius, Dirichlet."""
    p: float
    lam: float
    disk_radius: float
    amplitude: float
    grid: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    derivative: np.ndarray = field(repr=False)
    shoot_residual: float = 0.0
    profile: ScaledProfile = field(default=None, repr=False, compare=False)

    @property
    def scale(self) -> float:
        """κ = amplitude^{(p-1)/2}."""
        return math.exp(0.5 * (self.p - 1.0) * math.log(self.amplitude))

    @property
    def epsilon(self) -> float:
        return 1.0 / (math.sqrt(self.p - 1.0) * self.scale)

    @property
    def sup_norm_pow(self) -> float:
        """amplitude^{p-1}."""
        return self.scale ** 2

    def _state(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        if np.any(r < 0) or np.any(r > self.disk_radius * (1.0 + 1e-12)):
            raise ValueError(f"radius outside [0, {self.disk_radius}]")
        s = np.minimum(r * self.scale, self.profile.first_zero)
        return self.profile.evaluate(s)

    def u(self, r):
        values = self.amplitude * self._state(r)[0]
        return float(values[0]) if np.ndim(r) == 0 else values

    def du(self, r):
        values = self.amplitude * self.scale * self._state(r)[1]
        return float(values[0]) if np.ndim(r) == 0 else values

    @property
    def integrals(self) -> Dict[str, float]:
        """∫|∇u|², ∫u², ∫u^{p+1}, ∫u^p, ∫u^{p-1} over the disk."""
        q1, q2, q3, q4, q5 = self.profile.totals
        a = self.amplitude
        two_pi = 2.0 * math.pi
        return {
            "grad_sq": two_pi * a * a * q1,
            "l2_sq": two_pi * a * a * q2 / self.sup_norm_pow,
            "int_u_p1": two_pi * a * a * q3,
            "int_u_p": two_pi * a * q4,
            "int_u_pm1": two_pi * q5,
        }

    @property
    def c_squared(self) -> float:
        terms = self.integrals
        numerator = terms["grad_sq"] + self.lam * terms["l2_sq"]
        return numerator / terms["int_u_p1"] ** (2.0 / (self.p + 1.0))

    @property
    def energy_defect(self) -> float:
        """Relative defect of ∫|∇u|² + λ∫u² = ∫u^{p+1}."""
        terms = self.integrals
        lhs = terms["grad_sq"] + self.lam * terms["l2_sq"]
        return abs(lhs - terms["int_u_p1"]) / terms["int_u_p1"]

    @property
    def sobolev_ratio(self) -> float:
        """‖u‖_{L^p} / (√p·‖∇u‖_{L²})."""
        terms = self.integrals
        gradient_norm = math.sqrt(terms["grad_sq"])
        return terms["int_u_p"] ** (1.0 / self.p) / (math.sqrt(self.p) * gradient_norm)

    def rescaled_mass(self, window_radius: float) -> float:
        """(p-1)∫ u^{p-1} over B(0, window_radius·ε)."""
        s = min(window_radius / math.sqrt(self.p - 1.0), self.profile.first_zero)
        return (self.p - 1.0) * 2.0 * math.pi * float(self.profile.evaluate(s)[6, 0])

    def mass_fraction(self, rho: float) -> float:
        """Share of ∫u^p carried by B(0, rho)."""
        s = min(rho * self.scale, self.profile.first_zero)
        return float(self.profile.evaluate(s)[5, 0]) / float(self.profile.totals[3])

    def trace_rows(self) -> List[Dict[str, float]]:
        return [
            {"r": float(r), "u": float(u), "du": float(du)}
            for r, u, du in zip(self.grid, self.values, self.derivative)
        ]


def _scale_of(amplitude: float, p: float) -> float:
    return math.exp(0.5 * (p - 1.0) * math.log(amplitude))


def _trace(
    profile: ScaledProfile, amplitude: float, p: float
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    s1 = profile.first_zero
    if s1 <= CORE_END:
        s = np.linspace(0.0, s1, CORE_SAMPLES)
    else:
        core = np.linspace(0.0, CORE_END, CORE_SAMPLES)
        outer = np.exp(np.linspace(0.0, math.log(s1), OUTER_SAMPLES))[1:]
        s = np.concatenate([core, outer])
        s[-1] = s1
    state = profile.evaluate(s)
    kappa = _scale_of(amplitude, p)
    return s / kappa, amplitude * state[0], amplitude * kappa * state[1]


def _radius_mismatch(
    p: float, lam: float, disk_radius: float, amplitude: float, cache: Dict
) -> float:
    beta = lam / _scale_of(amplitude, p) ** 2
    profile = ScaledProfile(p, beta)
    cache[amplitude] = profile
    if profile.first_zero is None:
        return NO_ZERO_MISMATCH
    log_zero = math.log(profile.first_zero)
    return log_zero - 0.5 * (p - 1.0) * math.log(amplitude) - math.log(disk_radius)


def shoot(
    p: float, lam: float = 0.0, disk_radius: float = 1.0, tol: float = 1e-10
) -> RadialSolution:
    """
    Amplitude a = u(0) whose profile first vanishes at disk_radius.

    For λ = 0 the rescaled profile does not depend on a and the amplitude
    is (s₁/R)^{2/(p-1)}. For λ > 0 a geometric scan of 32 amplitudes over
    [0.99·(λ+λ₁)^{1/(p-1)}, 10] brackets the mismatch log(R(a)/R), which
    brentq then drives below tol.

    Raises:
        ValueError: p <= 1, λ < 0 or disk_radius <= 0
        BracketingError: no sign change over the scan, with the (a, mismatch) trace
        IntegrationError: the profile integration broke down
    """
    if not p > 1:
        raise ValueError(f"p must be > 1, got {p}")
    if lam < 0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    if not disk_radius > 0:
        raise ValueError(f"disk radius must be > 0, got {disk_radius}")

    if lam == 0:
        profile = ScaledProfile(p, 0.0)
        if profile.first_zero is None:
            raise IntegrationError(
                "Lane-Emden profile has no zero", radius=math.exp(MAX_LOG_RADIUS)
            )
        log_ratio = math.log(profile.first_zero) - math.log(disk_radius)
        amplitude = math.exp(2.0 / (p - 1.0) * log_ratio)
        residual = 0.0
    else:
        cache: Dict[float, ScaledProfile] = {}
        low = LOWER_AMPLITUDE_FACTOR * amplitude_lower_bound(p, lam, disk_radius)
        amplitudes = np.geomspace(low, UPPER_AMPLITUDE, SCAN_POINTS)
        scan = [
            (float(a), _radius_mismatch(p, lam, disk_radius, float(a), cache)) for a in amplitudes
        ]
        bracket = next(
            ((scan[i][0], scan[i + 1][0]) for i in range(len(scan) - 1)
             if scan[i][1] > 0 >= scan[i + 1][1]),
            None,
        )
        if bracket is None:
            raise BracketingError(
                f"no amplitude in [{low:.4g}, {UPPER_AMPLITUDE:g}] hits radius {disk_radius} "
                f"for p={p}, lambda={lam}",
                scan=scan,
            )
        rtol = max(4.0 * np.finfo(float).eps, tol / p)
        amplitude = brentq(
            lambda a: _radius_mismatch(p, lam, disk_radius, a, cache),
            *bracket, xtol=1e-15, rtol=rtol,
        )
        if amplitude not in cache:
            _radius_mismatch(p, lam, disk_radius, amplitude, cache)
        profile = cache[amplitude]
        mismatch = _radius_mismatch(p, lam, disk_radius, amplitude, cache)
        residual = abs(math.expm1(mismatch)) * disk_radius
        if residual > tol * disk_radius:
            logger.warning(
                f"shoot p={p} lambda={lam}: radius mismatch {residual:.2e} above {tol:.1e}"
            )

    grid, values, derivative = _trace(profile, amplitude, p)
    logger.debug(f"shoot p={p} lambda={lam} R={disk_radius}: amplitude {amplitude:.12g}")
    return RadialSolution(
        p=float(p),
        lam=float(lam),
        disk_radius=float(disk_radius),
        amplitude=float(amplitude),
        grid=grid,
        values=values,
        derivative=derivative,
        shoot_residual=residual,
        profile=profile,
    )


def oracle_profile(
    sol: RadialSolution,
    radii: Sequence[float] = constants.PROFILE_RADII,
    angles: int = constants.PROFILE_ANGLES,
) -> ProfileComparison:
    """φ(X) = (p-1)·log(u(ε|X|)/a) against U_{μ̄,0}, plus the sup discrepancy of φ'."""
    bubble = Bubble.limit_profile()
    root = math.sqrt(sol.p - 1.0)
    theta = 2.0 * math.pi * np.arange(angles) / angles
    points, phi, reference, dropped = [(0.0, 0.0)], [0.0], [float(bubble.radial(0.0))], []
    derivative_gap = 0.0
    for radius in radii:
        s = radius / root
        ring = [(radius * math.cos(t), radius * math.sin(t)) for t in theta]
        if s >= sol.profile.first_zero:
            dropped.extend(ring)
            continue
        w, ws = sol.profile.evaluate(s)[:2, 0]
        value = (sol.p - 1.0) * math.log(w)
        target = float(bubble.radial(radius))
        slope = float(bubble.radial_derivative(radius))
        derivative_gap = max(derivative_gap, abs(root * ws / w - slope))
        points.extend(ring)
        phi.extend([value] * angles)
        reference.extend([target] * angles)
    phi_values = np.array(phi)
    bubble_values = np.array(reference)
    return ProfileComparison(
        p=sol.p,
        lam=sol.lam,
        epsilon=sol.epsilon,
        sample_radii=list(radii),
        sample_points=np.array(points),
        phi_values=phi_values,
        bubble_values=bubble_values,
        sup_discrepancy=float(np.max(np.abs(phi_values - bubble_values))),
        window_resolved=True,
        dropped_samples=dropped,
        derivative_discrepancy=derivative_gap,
    )


def oracle_concentration(
    sol: RadialSolution,
    window_radius: float = constants.CONCENTRATION_WINDOW,
    rho: Optional[float] = None,
) -> ConcentrationRecord:
    """
    Rescaled-ball quantities on |X| ≤ window_radius: max of |∇u|²/(a^{p-1}u²),
    min of u/a, and (p-1)∫u^{p-1} against the bubble mass of the same ball.
    rho (default a tenth of the radius) sets the ball for the ∫u^p share.
    """
    s_window = min(window_radius / math.sqrt(sol.p - 1.0), sol.profile.first_zero)
    state = sol.profile.evaluate(np.linspace(0.0, s_window, 2001))
    w, ws = state[0], state[1]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(w > 0, (ws / w) ** 2, np.inf)
    rho = 0.1 * sol.disk_radius if rho is None else rho
    return ConcentrationRecord(
        p=sol.p,
        lam=sol.lam,
        window_radius=window_radius,
        f_max=float(np.max(ratio)),
        harnack_min=float(np.min(w)),
        psi_integral=sol.rescaled_mass(window_radius),
        bubble_mass=Bubble.limit_profile().mass(window_radius),
        window_resolved=True,
        concentration_fraction=sol.mass_fraction(rho),
    )


def amplitude_table(
    p_values: Sequence[float],
    lambda_values: Sequence[float] = (0.0,),
    disk_radius: float = 1.0,
) -> List[Dict[str, float]]:
    """Rows (p, lambda, amplitude, c_squared, epsilon), λ-major."""
    rows = []
    for lam in lambda_values:
        for p in p_values:
            sol = shoot(p, lam, disk_radius)
            rows.append({
                "p": sol.p,
                "lambda": sol.lam,
                "amplitude": sol.amplitude,
                "c_squared": sol.c_squared,
                "epsilon": sol.epsilon,
            })
    return rows
