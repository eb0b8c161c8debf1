"""Risk reductions and log-log rate fitting."""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np
from scipy import stats

from horizon_risk.config import MIN_RATE_POINTS
from horizon_risk.errors import DegenerateFit, DomainError

from .report import RateFit, RiskEstimate

REGION_NAMES = ("S1", "S2", "S3", "S4")


def image_risk(clean: np.ndarray, estimate: np.ndarray) -> float:
    """(1/n^2) * ||x - f||^2."""
    return float(np.mean((clean - estimate) ** 2))


class PixelMoments:
    """Running per-pixel mean and squared deviation of estimates (Welford).

    Estimates must be added in trial order for results to be reproducible.
    """

    def __init__(self, clean: np.ndarray) -> None:
        self.clean = clean
        self.count = 0
        self.mean = np.zeros_like(clean)
        self.m2 = np.zeros_like(clean)
        self.sq_error = np.zeros_like(clean)
        self.trial_risks: list[float] = []

    def add(self, estimate: np.ndarray) -> None:
        self.count += 1
        delta = estimate - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (estimate - self.mean)
        error = (self.clean - estimate) ** 2
        self.sq_error += error
        self.trial_risks.append(float(np.mean(error)))

    @property
    def mean_risk(self) -> float:
        return math.fsum(self.trial_risks) / self.count

    @property
    def stderr(self) -> float:
        return float(np.std(self.trial_risks, ddof=1) / math.sqrt(self.count))

    @property
    def bias_sq(self) -> float:
        """(1/n^2) * ||x - mean estimate||^2."""
        return image_risk(self.clean, self.mean)

    @property
    def variance(self) -> float:
        """(1/n^2) * mean over trials of ||f - mean estimate||^2."""
        return float(np.sum(self.m2)) / (self.count * self.clean.size)

    def region_risk(self, labels: np.ndarray) -> dict[str, float]:
        """Per-region share of mean_risk; labels hold 1..4 for S1..S4."""
        per_pixel = self.sq_error / (self.count * self.clean.size)
        return {
            name: float(np.sum(per_pixel[labels == k]))
            for k, name in enumerate(REGION_NAMES, start=1)
        }


def fit_power_law(
    n_values: Sequence[int],
    risks: Sequence[float],
    stderrs: Sequence[float] | None = None,
    *,
    weighted: bool = False,
) -> RateFit:
    """Fit ln risk = intercept + slope * ln n.

    Unweighted fits use ordinary least squares. weighted=True gives each
    point the weight (risk / stderr)^2, the inverse variance of ln risk.
    """
    if len(n_values) != len(risks):
        raise DegenerateFit(f"{len(n_values)} n values but {len(risks)} risks")
    if len(n_values) < MIN_RATE_POINTS:
        raise DegenerateFit(f"need at least {MIN_RATE_POINTS} points, got {len(n_values)}")
    if len(set(n_values)) < 2:
        raise DegenerateFit("all n values are equal")
    if any(r <= 0 for r in risks):
        raise DomainError("risks must be > 0 to fit on a log scale")

    log_n = np.log(np.asarray(n_values, dtype=np.float64))
    log_r = np.log(np.asarray(risks, dtype=np.float64))

    if not weighted:
        result = stats.linregress(log_n, log_r)
        slope, intercept, slope_stderr = result.slope, result.intercept, result.stderr
    else:
        if stderrs is None or any(s <= 0 for s in stderrs):
            raise DegenerateFit("a weighted fit needs a positive stderr for every point")
        root_w = np.asarray(risks) / np.asarray(stderrs)
        design = np.column_stack([np.ones_like(log_n), log_n])
        coef, *_ = np.linalg.lstsq(design * root_w[:, None], log_r * root_w, rcond=None)
        intercept, slope = coef
        residuals = (log_r - design @ coef) * root_w
        dof = len(log_n) - 2
        scale = float(residuals @ residuals) / dof
        cov = scale * np.linalg.inv((design * root_w[:, None] ** 2).T @ design)
        slope_stderr = math.sqrt(max(cov[1, 1], 0.0))

    return RateFit(
        slope=float(slope),
        intercept=float(intercept),
        slope_stderr=float(slope_stderr),
        n_values=[int(n) for n in n_values],
        risks=[float(r) for r in risks],
        weighted=weighted,
    )


def fit_rate(table: Sequence[RiskEstimate], *, weighted: bool = False) -> RateFit:
    """Rate fit over a sweep table; carries the family's reference slope when uniform."""
    fit = fit_power_law(
        [est.n for est in table],
        [est.mean_risk for est in table],
        [est.stderr for est in table],
        weighted=weighted,
    )
    refs = {est.slope_ref for est in table}
    if len(refs) == 1:
        fit = fit.model_copy(update={"slope_ref": refs.pop()})
    return fit
