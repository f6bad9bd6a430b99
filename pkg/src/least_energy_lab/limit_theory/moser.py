"""
Upper bounds on c_{λ,p} from the Moser function on a ball B(x, R) ⊂ Ω:

    m_d(x) = (2π)^{-1/2} √log(R/d)              |x| ≤ d
           = (2π)^{-1/2} log(R/|x|)/√log(R/d)   d ≤ |x| ≤ R
           = 0                                   |x| ≥ R

with ‖∇m_d‖₂ = 1.
"""
import math
from typing import NamedTuple

from scipy.integrate import quad


class MoserBound(NamedTuple):
    quotient_bound: float
    gradient_norm: float
    l2_norm_sq: float
    power_integral_lower: float


def _check(R: float, d: float, p: float, lam: float) -> None:
    if not 0 < d < R:
        raise ValueError(f"Moser function needs 0 < d < R, got d={d}, R={R}")
    if p <= 1:
        raise ValueError(f"p must be > 1, got {p}")
    if lam < 0:
        raise ValueError(f"lambda must be >= 0, got {lam}")


def moser_optimal_d(R: float, p: float) -> float:
    """d = R·e^{-(p+1)/4}."""
    return R * math.exp(-(p + 1.0) / 4.0)


def moser_norms(R: float, d: float):
    """(‖∇m_d‖², ‖m_d‖²) in closed form."""
    L = math.log(R / d)
    gradient_sq = math.log(R / d) / L
    annulus = (R ** 2 / 4.0 - (d ** 2 / 2.0) * (L ** 2 + L + 0.5)) / L
    return gradient_sq, d ** 2 * L / 2.0 + annulus


def moser_bound(R: float, d: float, p: float, lam: float = 0.0) -> MoserBound:
    """
    Bound J_λ(m_d)^{1/2} ≤ ((1 + λ‖m_d‖²) / I₁^{2/(p+1)})^{1/2}, where
    I₁ = πd²·(log(R/d)/(2π))^{(p+1)/2} is the inner-disk part of ∫m_d^{p+1}.

    Raises:
        ValueError: d ≥ R (or d ≤ 0)
    """
    _check(R, d, p, lam)
    L = math.log(R / d)
    gradient_sq, l2_sq = moser_norms(R, d)
    log_i1 = math.log(math.pi * d ** 2) + 0.5 * (p + 1.0) * math.log(L / (2.0 * math.pi))
    denominator = math.exp(2.0 / (p + 1.0) * log_i1)
    bound = math.sqrt((gradient_sq + lam * l2_sq) / denominator)
    return MoserBound(
        quotient_bound=bound,
        gradient_norm=math.sqrt(gradient_sq),
        l2_norm_sq=l2_sq,
        power_integral_lower=math.exp(log_i1),
    )


def moser_quotient(R: float, d: float, p: float, lam: float = 0.0) -> float:
    """J_λ(m_d)^{1/2} with the annulus part of ∫m_d^{p+1} integrated by quadrature."""
    _check(R, d, p, lam)
    L = math.log(R / d)
    bound = moser_bound(R, d, p, lam)

    def integrand(r: float) -> float:
        value = math.log(R / r) / math.sqrt(2.0 * math.pi * L)
        return value ** (p + 1.0) * 2.0 * math.pi * r

    annulus, _ = quad(integrand, d, R, limit=200)
    total = bound.power_integral_lower + annulus
    return math.sqrt((1.0 + lam * bound.l2_norm_sq) / total ** (2.0 / (p + 1.0)))


def moser_c_squared_p_bound(R: float, p: float, lam: float = 0.0) -> float:
    """p·c_{λ,p}² upper bound at the optimal d."""
    return p * moser_bound(R, moser_optimal_d(R, p), p, lam).quotient_bound ** 2
