"""Edge-pixel diagnostics: how much just-below-edge mass leaks into NLM estimates above the edge."""

from __future__ import annotations

import logging
import math

import numpy as np

from horizon_risk.denoising.nlm import CandidateSpectrum, _check_sizes, _images
from horizon_risk.errors import ConfigError, OddN
from horizon_risk.schemas.contour import EdgeContour
from horizon_risk.schemas.denoiser import NlmParams
from horizon_risk.schemas.noise import NoiseSpec
from horizon_risk.synthetic.contours import CONTOURS
from horizon_risk.synthetic.grid import ImageGrid
from horizon_risk.synthetic.horizon import edge_rows, render
from horizon_risk.synthetic.noise import add_noise

from .reference import edge_bias_limit, p0_reference
from .report import EdgeDiagnostics

logger = logging.getLogger(__name__)


def _trial_edge_stats(
    clean: ImageGrid,
    noisy: ImageGrid,
    params: NlmParams,
    rows: list[tuple[int, int]],
) -> tuple[float, float]:
    """(fraction of J passing, mean estimate) over all columns for one noise draw.

    Each of the n reference pixels is scored against all n^2 candidates
    through one FFT correlation, O(n^3 log n) per draw in total.
    """
    reference, candidate = _images(noisy, clean, params)
    spectrum = CandidateSpectrum(candidate, params.delta)
    columns = np.arange(len(rows))
    below = np.array([jb for _, jb in rows])
    fractions, estimates = [], []
    for i, (j_above, _) in enumerate(rows):
        weight = spectrum.weights_at(reference, params, i, j_above)
        fractions.append(float(np.mean(weight[columns, below] == 1.0)))
        estimates.append(float(np.sum(weight * noisy.data) / np.sum(weight)))
    return math.fsum(fractions) / len(rows), math.fsum(estimates) / len(rows)


def edge_diagnostics(
    n: int,
    sigma: float,
    params: NlmParams,
    trials: int,
    master_seed: int,
    contour: EdgeContour = CONTOURS["half"],
) -> EdgeDiagnostics:
    """Average over columns and trials of the J pass fraction and the edge estimate.

    For each column i the reference pixel is (i, j_above), the first pixel
    above the edge. J is the set of pixels (m, j_below(m)) just below it;
    the pass fraction counts those whose hard weight for the reference is 1.

    When the threshold exceeds every cross-edge distance (the default
    parameters at sigma = 1 do, since sigma^2 + t is near 2.9) the whole
    J row passes by construction: the fraction is 1 with zero spread and
    the estimate falls to the global mean. A threshold slack well below
    sigma^2 is needed for the fraction to estimate p0.
    """
    if n % 2:
        raise OddN(f"edge diagnostics need even n, got {n}")
    if params.oracle == "full" or params.weight_kind != "hard":
        raise ConfigError("edge diagnostics need hard weights with oracle 'none' or 'semi'")
    if trials < 2:
        raise ConfigError(f"trials must be >= 2, got {trials}")
    _check_sizes(n, params)

    clean = render(contour, n)
    rows = edge_rows(contour, n)
    fractions, estimates = [], []
    for k in range(trials):
        noisy = add_noise(clean, NoiseSpec(sigma=sigma, master_seed=master_seed, trial_index=k))
        fraction, estimate = _trial_edge_stats(clean, noisy, params, rows)
        fractions.append(fraction)
        estimates.append(estimate)

    fraction = math.fsum(fractions) / trials
    p0 = p0_reference(sigma)
    logger.info("edge n=%d sigma=%g %s: J pass fraction %.4f (p0 %.4f)", n, sigma, params.tag, fraction, p0)
    if min(fractions) == 1.0:
        logger.warning(
            "threshold %.4g accepts every J pixel in every trial; the pass fraction does not estimate p0",
            params.threshold,
        )
    return EdgeDiagnostics(
        n=n,
        sigma=sigma,
        params=params,
        trials=trials,
        master_seed=master_seed,
        fraction_passing_J=fraction,
        fraction_stderr=float(np.std(fractions, ddof=1) / math.sqrt(trials)),
        mean_edge_estimate=math.fsum(estimates) / trials,
        edge_estimate_stderr=float(np.std(estimates, ddof=1) / math.sqrt(trials)),
        p0_reference=p0,
        bias_lower_bound=fraction / (1.0 + 2.0 * fraction),
        edge_bias_limit=edge_bias_limit(p0),
    )
