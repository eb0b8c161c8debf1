"""Result models: per-run risk estimates, rate fits, edge diagnostics and sweep reports."""

from __future__ import annotations

from pydantic import BaseModel, Field
from scipy import stats

from horizon_risk.schemas.denoiser import NlmParams


class RiskEstimate(BaseModel):
    """Monte Carlo mean-square risk of one denoiser at one (n, sigma).

    bias_sq and variance are plug-in estimates, so their sum equals
    mean_risk up to rounding. bias_sq is biased upward by about
    variance / trials.
    """

    n: int = Field(ge=1)
    sigma: float = Field(gt=0.0)
    denoiser: str
    label: str = ""
    trials: int = Field(ge=2)
    master_seed: int = Field(ge=0)
    mean_risk: float = Field(ge=0.0)
    stderr: float = Field(ge=0.0)
    bias_sq: float = Field(ge=0.0)
    variance: float = Field(ge=0.0)
    slope_ref: float | None = None

    # Contributions of the S1..S4 edge regions, present when a band delta was given
    region_delta: int | None = None
    region_risk: dict[str, float] | None = None


class RateFit(BaseModel):
    """Least-squares line through (ln n, ln risk)."""

    slope: float
    intercept: float
    slope_stderr: float = Field(ge=0.0)
    n_values: list[int]
    risks: list[float]
    weighted: bool = False
    slope_ref: float | None = None

    def confidence_interval(self, level: float = 0.95) -> tuple[float, float]:
        """Student-t interval for the slope with len(n_values) - 2 degrees of freedom."""
        dof = len(self.n_values) - 2
        half = stats.t.ppf(0.5 + level / 2.0, dof) * self.slope_stderr
        return self.slope - half, self.slope + half

    def describe(self) -> str:
        text = f"slope {self.slope:.4f} ± {self.slope_stderr:.4f}"
        if self.slope_ref is not None:
            text += f" (reference {self.slope_ref:.4f})"
        return text


class EdgeDiagnostics(BaseModel):
    """How often just-below-edge pixels pass the NLM test for the pixels just above it."""

    n: int
    sigma: float
    params: NlmParams
    trials: int
    master_seed: int
    fraction_passing_J: float = Field(ge=0.0, le=1.0)
    fraction_stderr: float = Field(ge=0.0)
    mean_edge_estimate: float
    edge_estimate_stderr: float = Field(ge=0.0)
    p0_reference: float
    bias_lower_bound: float
    edge_bias_limit: float


class SweepReport(BaseModel):
    """One RiskEstimate per n for a denoiser family, plus the fitted rate."""

    family: str
    contour: str
    sigma: float
    trials: int
    master_seed: int
    estimates: list[RiskEstimate] = Field(default_factory=list)
    fit: RateFit | None = None

    def summary(self) -> str:
        lines = [
            f"Sweep: {self.family} on {self.contour}, sigma={self.sigma:g}, "
            f"{self.trials} trials, seed {self.master_seed}",
        ]
        for est in self.estimates:
            lines.append(
                f"  n={est.n:<5d} {est.label or est.denoiser:<28s} "
                f"risk {est.mean_risk:.4e} ± {est.stderr:.1e}  "
                f"bias² {est.bias_sq:.4e}  var {est.variance:.4e}"
            )
        if self.fit is not None:
            lines.append(f"  fit: {self.fit.describe()}")
        return "\n".join(lines)
