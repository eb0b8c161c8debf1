from .edge import edge_diagnostics
from .metrics import PixelMoments, fit_power_law, fit_rate, image_risk
from .reference import (
    below_edge_tail_bound,
    chisq_lower_tail_bound,
    chisq_tail_bounds,
    chisq_upper_tail_bound,
    edge_bias_limit,
    g_variance,
    gaussian_sq_mgf,
    minimax_exponent,
    p0_reference,
    reference_slope,
)
from .report import EdgeDiagnostics, RateFit, RiskEstimate, SweepReport
from .runner import FAMILIES, empirical_risk, family_spec, rate_sweep, tune_halfwidth

__all__ = [
    "FAMILIES",
    "EdgeDiagnostics",
    "PixelMoments",
    "RateFit",
    "RiskEstimate",
    "SweepReport",
    "below_edge_tail_bound",
    "chisq_lower_tail_bound",
    "chisq_tail_bounds",
    "chisq_upper_tail_bound",
    "edge_bias_limit",
    "edge_diagnostics",
    "empirical_risk",
    "family_spec",
    "fit_power_law",
    "fit_rate",
    "g_variance",
    "gaussian_sq_mgf",
    "image_risk",
    "minimax_exponent",
    "p0_reference",
    "rate_sweep",
    "reference_slope",
    "tune_halfwidth",
]
