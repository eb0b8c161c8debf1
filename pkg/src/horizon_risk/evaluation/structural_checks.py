"""Programmatic checks of parameter assumptions, render shape and result consistency.

Each check returns a list of human-readable issues; an empty list means it passed.
"""

from __future__ import annotations

import math

import numpy as np

from horizon_risk.denoising.linear import Kernel, response_gradient_norm
from horizon_risk.denoising.nlm import pass_probability, tapered_weight_mean
from horizon_risk.schemas.denoiser import NlmParams
from horizon_risk.synthetic.grid import ImageGrid

from .report import RiskEstimate

_VALUE_TOL = 1e-12


def check_nlm_assumptions(
    params: NlmParams,
    n: int,
    *,
    mc_trials: int = 0,
    seed: int = 0,
) -> list[str]:
    """Check hard-weight NLM parameters against the conditions of the rate guarantees.

    A1: delta grows at least like 2 sqrt(ln n).
    A2: hard weights with slack t > 0 above the noise floor.
    A3: patches differing on half their offsets pass with probability below
        1/n (Monte Carlo, only when mc_trials > 0).
    A4: delta <= n^0.3.
    """
    issues = []
    growth = math.ceil(2.0 * math.sqrt(math.log(n)))
    if params.delta < growth:
        issues.append(f"A1: delta={params.delta} grows slower than 2 sqrt(ln n) = {growth} at n={n}")
    if params.weight_kind != "hard":
        issues.append("A2: weights are not hard thresholds")
    if mc_trials > 0:
        threshold = 2.0 * params.sigma**2 + params.t
        p = pass_probability(0.5, params.sigma, params.delta, threshold, mc_trials, seed)
        if p >= 1.0 / n:
            issues.append(f"A3: pass probability {p:.4g} at distance 1/2 is not below 1/n = {1 / n:.4g}")
    if params.delta > n**0.3:
        issues.append(f"A4: delta={params.delta} exceeds n^0.3 = {n**0.3:.3f}")
    return issues


def check_tapered_policy(
    params: NlmParams,
    n: int,
    *,
    trials: int = 10_000,
    seed: int = 0,
) -> list[str]:
    """Check tapered-weight parameters.

    B1: delta >= 2 ln n.  B2: weights bounded by a finite alpha.
    B3: mean weight at clean distance 0 is at least 1/2.
    B4: mean weight at clean distance 1 is at most 3 n^{-1/2}.
    """
    if params.weight_kind != "tapered":
        return ["B2: weights are not tapered"]
    issues = []
    if params.delta < 2.0 * math.log(n):
        issues.append(f"B1: delta={params.delta} is below 2 ln n = {2 * math.log(n):.3f}")
    if not math.isfinite(params.taper_alpha):
        issues.append("B2: weight bound alpha is not finite")
    same = tapered_weight_mean(0.0, params, trials, seed)
    if same < 0.5:
        issues.append(f"B3: mean weight {same:.4f} at distance 0 is below 0.5")
    cross = tapered_weight_mean(1.0, params, trials, seed)
    if cross > 3.0 / math.sqrt(n):
        issues.append(f"B4: mean weight {cross:.4g} at distance 1 exceeds 3/sqrt(n) = {3 / math.sqrt(n):.4g}")
    return issues


def check_render_invariants(grid: ImageGrid) -> list[str]:
    """Values in [0, 1], nonincreasing up each column, edge within two adjacent rows."""
    issues = []
    data = grid.data
    if data.min() < -_VALUE_TOL or data.max() > 1.0 + _VALUE_TOL:
        issues.append(f"values leave [0, 1]: range [{data.min():.6g}, {data.max():.6g}]")
    for i, column in enumerate(data):
        if np.any(np.diff(column) > _VALUE_TOL):
            issues.append(f"column {i}: values increase with j")
        fractional = np.flatnonzero((column > _VALUE_TOL) & (column < 1.0 - _VALUE_TOL))
        if fractional.size > 2 or (fractional.size == 2 and fractional[1] - fractional[0] != 1):
            issues.append(f"column {i}: fractional values in rows {fractional.tolist()}")
    return issues


def check_gradient_bound(kernel: Kernel, n: int, bound: float) -> list[str]:
    """The response gradient |grad G| must stay below the supplied constant."""
    norm = response_gradient_norm(kernel, n)
    if norm > bound:
        return [f"response gradient norm {norm:.4g} exceeds {bound:g} at n={n}"]
    return []


def check_risk_estimate(estimate: RiskEstimate, tol: float = 1e-10) -> list[str]:
    """bias_sq + variance must reproduce mean_risk; regional risks must add up to it."""
    issues = []
    scale = max(1.0, estimate.mean_risk)
    gap = abs(estimate.bias_sq + estimate.variance - estimate.mean_risk)
    if gap > tol * scale:
        issues.append(f"bias_sq + variance misses mean_risk by {gap:.3g}")
    if estimate.region_risk is not None:
        gap = abs(math.fsum(estimate.region_risk.values()) - estimate.mean_risk)
        if gap > tol * scale:
            issues.append(f"regional risks miss mean_risk by {gap:.3g}")
    return issues
