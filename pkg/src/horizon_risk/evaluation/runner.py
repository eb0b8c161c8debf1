"""Monte Carlo risk runs: empirical_risk() for one configuration, rate_sweep() over n."""

from __future__ import annotations

import logging
import math
from collections.abc import Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from functools import partial

import numpy as np
from tqdm import tqdm

from horizon_risk.config import (
    DEFAULT_NLM_MAX_N,
    DEFAULT_TUNING_TRIALS,
    worker_count,
)
from horizon_risk.denoising.dispatch import denoise
from horizon_risk.denoising.nlm import default_params, tapered_default_params
from horizon_risk.errors import ConfigError
from horizon_risk.schemas.contour import EdgeContour
from horizon_risk.schemas.denoiser import DenoiserSpec, YfParams
from horizon_risk.schemas.noise import NoiseSpec
from horizon_risk.synthetic.grid import ImageGrid
from horizon_risk.synthetic.horizon import region_partition, render
from horizon_risk.synthetic.noise import RISK_STREAM, TUNING_STREAM, add_noise

from .metrics import PixelMoments, fit_rate, image_risk
from .reference import reference_slope
from .report import RiskEstimate, SweepReport
from .structural_checks import check_nlm_assumptions

logger = logging.getLogger(__name__)

FAMILIES = ("identity", "mean", "box", "yf", "syf", "nlm", "snlm", "fnlm", "tapered", "wavelet")
NLM_FAMILIES = ("nlm", "snlm", "fnlm", "tapered")
TUNED_FAMILIES = ("box", "yf", "syf")


def _trial_estimate(
    denoiser: DenoiserSpec,
    clean: np.ndarray,
    sigma: float,
    master_seed: int,
    trial_index: int,
    stream: int = RISK_STREAM,
) -> np.ndarray:
    """Denoise one noisy realization; top-level so worker processes can unpickle it."""
    clean_grid = ImageGrid(clean)
    spec = NoiseSpec(sigma=sigma, master_seed=master_seed, trial_index=trial_index, stream=stream)
    return denoise(denoiser, add_noise(clean_grid, spec), clean_grid).data


def _estimates(
    task,
    trials: int,
    workers: int,
    progress: bool,
    desc: str,
) -> Iterator[np.ndarray]:
    """Trial estimates in trial order, serially or from a process pool."""
    if workers <= 1:
        yield from tqdm(map(task, range(trials)), total=trials, desc=desc, disable=not progress)
        return
    with ProcessPoolExecutor(max_workers=workers) as executor:
        results = executor.map(task, range(trials), chunksize=max(1, trials // (4 * workers)))
        yield from tqdm(results, total=trials, desc=desc, disable=not progress)


def empirical_risk(
    denoiser: DenoiserSpec,
    contour: EdgeContour,
    n: int,
    sigma: float,
    trials: int,
    master_seed: int,
    *,
    region_delta: int | None = None,
    workers: int | None = None,
    progress: bool = False,
) -> RiskEstimate:
    """Estimate the mean-square risk of `denoiser` on the Horizon image of `contour`.

    Args:
        denoiser: The algorithm and its parameters.
        contour: Edge contour of the clean image, rendered once.
        n: Pixels per side.
        sigma: Noise standard deviation.
        trials: Number of noise realizations (>= 2); trial k uses substream k.
        master_seed: Seed every substream derives from.
        region_delta: If given, also split the risk over the S1..S4 edge regions.
        workers: Worker processes; defaults to HORIZON_RISK_THREADS or all cores.
        progress: Show a progress bar.
    """
    if trials < 2:
        raise ConfigError(f"trials must be >= 2, got {trials}")
    clean = render(contour, n).data
    task = partial(_trial_estimate, denoiser, clean, sigma, master_seed)
    workers = min(worker_count() if workers is None else workers, trials)

    moments = PixelMoments(clean)
    for estimate in _estimates(task, trials, workers, progress, f"{denoiser.label()} n={n}"):
        moments.add(estimate)

    region_risk = None
    if region_delta is not None:
        region_risk = moments.region_risk(region_partition(contour, n, region_delta))

    result = RiskEstimate(
        n=n,
        sigma=sigma,
        denoiser=denoiser.tag,
        label=denoiser.label(),
        trials=trials,
        master_seed=master_seed,
        mean_risk=moments.mean_risk,
        stderr=moments.stderr,
        bias_sq=moments.bias_sq,
        variance=moments.variance,
        slope_ref=reference_slope(denoiser.tag),
        region_delta=region_delta,
        region_risk=region_risk,
    )
    logger.info(
        "%s n=%d sigma=%g: risk %.4e ± %.1e over %d trials",
        result.label, n, sigma, result.mean_risk, result.stderr, trials,
    )
    return result


def _tuned_spec(family: str, size: int, sigma: float) -> DenoiserSpec:
    if family == "box":
        return DenoiserSpec(kind="box", halfwidth=size)
    return DenoiserSpec(kind="yf", yf=YfParams(delta=size, tau=sigma, oracle=family == "syf"))


def tune_halfwidth(
    contour: EdgeContour,
    n: int,
    sigma: float,
    master_seed: int,
    *,
    family: str = "box",
    trials: int = DEFAULT_TUNING_TRIALS,
) -> int:
    """Oracle grid search over halfwidths 1..ceil(2 n^{1/3}) minimizing empirical risk.

    Noise comes from the tuning stream, so the chosen size is independent of
    the trials later used to score it. For the Yaroslavsky families the
    halfwidth is the neighborhood half-size delta, with tau = sigma.
    """
    if family not in TUNED_FAMILIES:
        raise ConfigError(f"family {family!r} has no tuned halfwidth")
    clean = render(contour, n).data
    limit = min(math.ceil(2.0 * n ** (1.0 / 3.0)), (n - 1) // 2)
    candidates = range(1, max(limit, 1) + 1)

    best_size, best_risk = 1, math.inf
    for size in candidates:
        spec = _tuned_spec(family, size, sigma)
        risk = math.fsum(
            image_risk(clean, _trial_estimate(spec, clean, sigma, master_seed, k, TUNING_STREAM))
            for k in range(trials)
        ) / trials
        if risk < best_risk:
            best_size, best_risk = size, risk
    logger.info("tuned %s at n=%d: halfwidth %d (risk %.4e)", family, n, best_size, best_risk)
    return best_size


def family_spec(
    family: str,
    contour: EdgeContour,
    n: int,
    sigma: float,
    master_seed: int,
    *,
    epsilon: float = 0.1,
    tuning_trials: int = DEFAULT_TUNING_TRIALS,
) -> DenoiserSpec:
    """The per-n parameter rule attached to each denoiser family."""
    if family in ("identity", "mean"):
        return DenoiserSpec(kind=family)
    if family in TUNED_FAMILIES:
        size = tune_halfwidth(contour, n, sigma, master_seed, family=family, trials=tuning_trials)
        return _tuned_spec(family, size, sigma)
    if family == "tapered":
        return DenoiserSpec(kind="nlm", nlm=tapered_default_params(n, sigma))
    if family in NLM_FAMILIES:
        oracle = {"nlm": "none", "snlm": "semi", "fnlm": "full"}[family]
        params = default_params(n, epsilon, sigma).model_copy(update={"oracle": oracle})
        return DenoiserSpec(kind="nlm", nlm=params)
    if family == "wavelet":
        return DenoiserSpec(kind="wavelet", sigma=sigma)
    raise ConfigError(f"unknown denoiser family {family!r}; expected one of {', '.join(FAMILIES)}")


def validate_sweep(family: str, n_list: Sequence[int], *, allow_large_nlm: bool = False) -> None:
    """Reject sweeps whose n values the family cannot run, before any work starts."""
    if family not in FAMILIES:
        raise ConfigError(f"unknown denoiser family {family!r}; expected one of {', '.join(FAMILIES)}")
    if len(n_list) < 3:
        raise ConfigError(f"a sweep needs at least 3 n values, got {len(n_list)}")
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ConfigError(f"n values must be strictly increasing, got {list(n_list)}")
    if n_list[0] < 4:
        raise ConfigError(f"n values must be >= 4, got {n_list[0]}")
    if family == "wavelet" and any(n & (n - 1) for n in n_list):
        raise ConfigError(f"the wavelet family needs powers of two, got {list(n_list)}")
    if family in NLM_FAMILIES and max(n_list) > DEFAULT_NLM_MAX_N and not allow_large_nlm:
        raise ConfigError(
            f"NLM sweeps stop at n={DEFAULT_NLM_MAX_N} unless large sizes are allowed "
            f"(full search costs O(n^4) per image)"
        )


def rate_sweep(
    family: str,
    contour: EdgeContour,
    n_list: Sequence[int],
    sigma: float,
    trials: int,
    master_seed: int,
    *,
    epsilon: float = 0.1,
    tuning_trials: int = DEFAULT_TUNING_TRIALS,
    allow_large_nlm: bool = False,
    weighted: bool = False,
    region_delta: int | None = None,
    workers: int | None = None,
    progress: bool = False,
) -> SweepReport:
    """One RiskEstimate per n with the family's parameter rule, plus the fitted rate."""
    validate_sweep(family, n_list, allow_large_nlm=allow_large_nlm)
    estimates = []
    for n in n_list:
        spec = family_spec(
            family, contour, n, sigma, master_seed, epsilon=epsilon, tuning_trials=tuning_trials,
        )
        if spec.kind == "nlm" and spec.nlm.weight_kind == "hard":
            for issue in check_nlm_assumptions(spec.nlm, n):
                logger.warning("%s n=%d: %s", family, n, issue)
        estimates.append(
            empirical_risk(
                spec, contour, n, sigma, trials, master_seed,
                region_delta=region_delta, workers=workers, progress=progress,
            )
        )

    fit = None
    if all(est.mean_risk > 0 for est in estimates):
        fit = fit_rate(estimates, weighted=weighted)
    else:
        logger.warning("%s sweep has a zero risk; skipping the rate fit", family)
    return SweepReport(
        family=family,
        contour=contour.label(),
        sigma=sigma,
        trials=trials,
        master_seed=master_seed,
        estimates=estimates,
        fit=fit,
    )
