"""Closed-form reference quantities: edge pass probability, concentration bounds, rate exponents."""

from __future__ import annotations

import math

from scipy.stats import norm

from horizon_risk.errors import DomainError

# Theoretical log-log slope of risk against n for each denoiser family.
REFERENCE_SLOPES: dict[str, float] = {
    "identity": 0.0,
    "mean": 0.0,
    "box": -2.0 / 3.0,
    "linear": -2.0 / 3.0,
    "yf": -2.0 / 3.0,
    "syf": -2.0 / 3.0,
    "nlm": -1.0,
    "snlm": -1.0,
    "fnlm": -1.0,
    "tapered": -1.0,
    "wavelet": -1.0,
}


def minimax_exponent(alpha: float) -> float:
    """-2 alpha / (alpha + 1), the minimax risk exponent over the Horizon class."""
    if alpha <= 0:
        raise DomainError(f"alpha must be > 0, got {alpha}")
    return -2.0 * alpha / (alpha + 1.0)


def reference_slope(family: str) -> float | None:
    return REFERENCE_SLOPES.get(family)


def p0_reference(sigma: float) -> float:
    """p0 = Phi(-1 / (sigma^2 sqrt 2)) / 2, half the probability that N(0, 2 sigma^4) <= -1."""
    if sigma <= 0:
        raise DomainError(f"sigma must be > 0, got {sigma}")
    return float(norm.cdf(-1.0 / (sigma**2 * math.sqrt(2.0)))) / 2.0


def g_variance(sigma: float, delta: int) -> float:
    """E(G^2) = 2 sigma^4 + (8 sigma^2 delta - 2 sigma^4) / (2 delta + 1)^2."""
    if delta < 1:
        raise DomainError(f"delta must be >= 1, got {delta}")
    return 2.0 * sigma**4 + (8.0 * sigma**2 * delta - 2.0 * sigma**4) / (2 * delta + 1) ** 2


def edge_bias_limit(p0: float) -> float:
    """p0 / (p0 + 1), the large-n limit of the edge-pixel bias lower bound."""
    return p0 / (p0 + 1.0)


def chisq_upper_tail_bound(n: int, t: float) -> float:
    """P((1/n) sum Z_i^2 - 1 > t) <= exp(-n/2 (t - ln(1 + t)))."""
    if t <= 0:
        raise DomainError(f"t must be > 0, got {t}")
    return math.exp(-n / 2.0 * (t - math.log1p(t)))


def chisq_lower_tail_bound(n: int, t: float) -> float:
    """P((1/n) sum Z_i^2 - 1 < -t) <= exp(n/2 (t + ln(1 - t))), for 0 < t < 1.

    The exponent t + ln(1 - t) is negative, so the bound lies in (0, 1).
    """
    if not 0 < t < 1:
        raise DomainError(f"the lower-tail bound needs 0 < t < 1, got {t}")
    return math.exp(n / 2.0 * (t + math.log1p(-t)))


def chisq_tail_bounds(n: int, t: float) -> tuple[float, float | None]:
    """(upper, lower) tail bounds; lower is None when t >= 1 (the event is empty)."""
    upper = chisq_upper_tail_bound(n, t)
    lower = chisq_lower_tail_bound(n, t) if t < 1 else None
    return upper, lower


def gaussian_sq_mgf(lam: float, sigma: float) -> float:
    """E exp(lam Z^2) = 1 / sqrt(1 - 2 lam sigma^2) for Z ~ N(0, sigma^2)."""
    if lam >= 1.0 / (2.0 * sigma**2):
        raise DomainError(f"lambda must be < 1/(2 sigma^2) = {1.0 / (2.0 * sigma**2):g}, got {lam}")
    return 1.0 / math.sqrt(1.0 - 2.0 * lam * sigma**2)


def below_edge_tail_bound(n: int, delta: int, t: float) -> float:
    """4 delta exp(-t^2 / (4 n delta)): deviation bound for the count of passing pixels in J."""
    return 4.0 * delta * math.exp(-(t**2) / (4.0 * n * delta))
