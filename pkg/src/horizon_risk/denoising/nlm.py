"""Nonlocal means with hard, tapered and oracle weights.

The patch distance between reference pixel (i, j) and candidate (m, l) is the
mean squared difference over the (2 delta + 1)^2 - 1 non-center offsets:

    d^2 = (1/rho^2) * [sum_{p,q} (ref(i+p, j+q) - cand(m+p, l+q))^2 - (ref(i,j) - cand(m,l))^2]

with rho^2 = (2 delta + 1)^2 - 1 and all indices periodic. The images
compared depend on the oracle level: none compares y with y, semi compares
the clean patch x with the noisy patch y, full compares x with x.

``nlm_denoise`` visits candidate offsets one at a time. For a fixed offset
the squared-difference image is box-summed with a wrapped running-sum
table, so each offset costs O(n^2) regardless of delta.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from horizon_risk.errors import DeltaTooLarge, DomainError, MissingCleanImage, WindowTooSmall
from horizon_risk.schemas.denoiser import NlmParams
from horizon_risk.schemas.noise import NoiseSpec
from horizon_risk.synthetic.grid import ImageGrid
from horizon_risk.synthetic.noise import PATCH_STREAM, generator

logger = logging.getLogger(__name__)

_MIN_PASS_TRIALS = 1000
_CHUNK_VALUES = 1 << 20


# ── Distances ────────────────────────────────────────────────────────────


def _window_sum(values: np.ndarray, delta: int, axis: int) -> np.ndarray:
    """Periodic sum over [-delta, delta] along one axis via a running-sum table."""
    pad = [(delta, delta) if ax == axis else (0, 0) for ax in range(values.ndim)]
    wrapped = np.pad(values, pad, mode="wrap")
    table = np.cumsum(wrapped, axis=axis)
    zero_shape = list(table.shape)
    zero_shape[axis] = 1
    table = np.concatenate([np.zeros(zero_shape), table], axis=axis)
    side = 2 * delta + 1
    upper = np.take(table, np.arange(side, table.shape[axis]), axis=axis)
    lower = np.take(table, np.arange(0, table.shape[axis] - side), axis=axis)
    return upper - lower


def _patch_sum(values: np.ndarray, delta: int) -> np.ndarray:
    """S[i, j] = sum of values over the periodic (2 delta + 1)^2 patch centered at (i, j)."""
    return _window_sum(_window_sum(values, delta, 0), delta, 1)


def _shifted(image: np.ndarray, dm: int, dl: int) -> np.ndarray:
    """out[i, j] = image[(i + dm) mod n, (j + dl) mod n]."""
    return np.roll(image, (-dm, -dl), axis=(0, 1))


def patch_distance(
    ref_img: ImageGrid,
    cand_img: ImageGrid,
    i: int,
    j: int,
    m: int,
    l: int,
    delta: int,
) -> float:
    """d^2 between the delta-patch of ref_img at (i, j) and of cand_img at (m, l)."""
    if delta < 1:
        raise DomainError(f"patch half-size must be >= 1, got {delta}")
    n = ref_img.n
    span = np.arange(-delta, delta + 1)
    ref_patch = ref_img.data[np.ix_((i + span) % n, (j + span) % n)]
    cand_patch = cand_img.data[np.ix_((m + span) % n, (l + span) % n)]
    total = float(np.sum((ref_patch - cand_patch) ** 2))
    center = (ref_img.data[i % n, j % n] - cand_img.data[m % n, l % n]) ** 2
    rho_sq = (2 * delta + 1) ** 2 - 1
    return (total - center) / rho_sq


# ── Weights ──────────────────────────────────────────────────────────────


def _images(
    noisy: ImageGrid, clean: ImageGrid | None, params: NlmParams
) -> tuple[np.ndarray, np.ndarray]:
    """(reference, candidate) arrays compared by the distance at this oracle level."""
    if params.oracle != "none" and clean is None:
        raise MissingCleanImage(f"oracle level {params.oracle!r} needs the clean image")
    if params.oracle == "none":
        return noisy.data, noisy.data
    if params.oracle == "semi":
        return clean.data, noisy.data
    return clean.data, clean.data


def _weights(dist_sq: np.ndarray, params: NlmParams) -> np.ndarray:
    if params.weight_kind == "hard":
        return (dist_sq <= params.threshold).astype(np.float64)
    excess = np.maximum(dist_sq - params.noise_floor, 0.0)
    return np.minimum(params.taper_alpha, np.exp(-excess / params.taper_bandwidth))


def _check_sizes(n: int, params: NlmParams) -> None:
    if 2 * params.delta + 1 > n:
        raise DeltaTooLarge(f"patch side {2 * params.delta + 1} exceeds image size {n}")
    if params.search == "window" and params.window < 1:
        raise WindowTooSmall(f"search window half-size must be >= 1, got {params.window}")


def _search_offsets(n: int, params: NlmParams) -> list[tuple[int, int]]:
    """Candidate offsets in row-major order, each distinct modulo n."""
    if params.search == "full" or 2 * params.window + 1 >= n:
        return [(dm, dl) for dm in range(n) for dl in range(n)]
    span = range(-params.window, params.window + 1)
    return [(dm % n, dl % n) for dm in span for dl in span]


def nlm_denoise(
    noisy: ImageGrid,
    clean: ImageGrid | None,
    params: NlmParams,
) -> ImageGrid:
    """output(i, j) = sum_S w y(m, l) / sum_S w over the search set S.

    In the symmetric modes (oracle none or full) the weight of candidate
    p + o for reference p equals the weight of p for reference p + o, so
    each offset pair {o, -o} is evaluated once.
    """
    n = noisy.n
    _check_sizes(n, params)
    reference, candidate = _images(noisy, clean, params)
    y = noisy.data
    symmetric = params.oracle != "semi"
    force_self = params.oracle == "semi" and params.weight_kind == "hard"

    offsets = _search_offsets(n, params)
    logger.debug("nlm %s: n=%d, %d offsets", params.tag, n, len(offsets))
    offset_set = set(offsets)
    numerator = np.zeros_like(y)
    denominator = np.zeros_like(y)
    for dm, dl in offsets:
        mirror = ((-dm) % n, (-dl) % n)
        if symmetric and mirror in offset_set and mirror < (dm, dl):
            continue
        cand = _shifted(candidate, dm, dl)
        diff_sq = (reference - cand) ** 2
        dist_sq = (_patch_sum(diff_sq, params.delta) - diff_sq) / params.rho_sq
        weight = _weights(dist_sq, params)
        if force_self and (dm, dl) == (0, 0):
            weight = np.ones_like(weight)
        weighted = weight * _shifted(y, dm, dl)
        numerator += weighted
        denominator += weight
        if symmetric and mirror != (dm, dl) and mirror in offset_set:
            numerator += np.roll(weight * y, (dm, dl), axis=(0, 1))
            denominator += np.roll(weight, (dm, dl), axis=(0, 1))
    return ImageGrid(numerator / denominator)


def _restrict(weight: np.ndarray, params: NlmParams, i: int, j: int) -> np.ndarray:
    """Zero candidates outside the search window; pin the semi-oracle hard self weight to 1."""
    n = weight.shape[0]
    if params.search == "window" and 2 * params.window + 1 < n:
        rows = np.arange(n)
        near_i = np.minimum((rows - i) % n, (i - rows) % n) <= params.window
        near_j = np.minimum((rows - j) % n, (j - rows) % n) <= params.window
        weight = weight * np.outer(near_i, near_j)
    if params.oracle == "semi" and params.weight_kind == "hard":
        weight[i, j] = 1.0
    return weight


def _patch_stack(image: np.ndarray, delta: int) -> np.ndarray:
    """stack[m, l, k] = image at (m, l) + k-th patch offset, offsets row-major."""
    span = range(-delta, delta + 1)
    return np.stack([_shifted(image, p, q) for p in span for q in span], axis=-1)


def _weights_at(
    reference: np.ndarray,
    cand_stack: np.ndarray,
    params: NlmParams,
    i: int,
    j: int,
) -> np.ndarray:
    """n x n weight map of every candidate for reference pixel (i, j)."""
    n = reference.shape[0]
    center = cand_stack.shape[-1] // 2
    span = np.arange(-params.delta, params.delta + 1)
    ref_patch = reference[np.ix_((i + span) % n, (j + span) % n)].ravel()
    diff_sq = (cand_stack - ref_patch) ** 2
    dist_sq = (diff_sq.sum(axis=-1) - diff_sq[..., center]) / params.rho_sq
    return _restrict(_weights(dist_sq, params), params, i, j)


class CandidateSpectrum:
    """Per-image terms for evaluating one reference pixel against every candidate in O(n^2 log n).

    Expanding the squared difference, rho^2 d^2(p, q) is the reference patch
    energy plus the candidate patch energy minus twice their circular
    cross-correlation, all without the center offset. The correlation is
    taken through the 2D FFT of the candidate image, computed once here.
    """

    def __init__(self, candidate: np.ndarray, delta: int):
        self.delta = delta
        self.spectrum = np.fft.rfft2(candidate)
        self.energy = _patch_sum(candidate**2, delta) - candidate**2

    def weights_at(self, reference: np.ndarray, params: NlmParams, i: int, j: int) -> np.ndarray:
        """Same map as the patch-stack evaluation, up to floating-point rounding."""
        n = reference.shape[0]
        span = np.arange(-self.delta, self.delta + 1)
        kernel = np.zeros_like(reference)
        kernel[np.ix_(span % n, span % n)] = reference[np.ix_((i + span) % n, (j + span) % n)]
        kernel[0, 0] = 0.0
        cross = np.fft.irfft2(np.conj(np.fft.rfft2(kernel)) * self.spectrum, s=reference.shape)
        dist_sq = (np.sum(kernel**2) + self.energy - 2.0 * cross) / params.rho_sq
        return _restrict(_weights(np.maximum(dist_sq, 0.0), params), params, i, j)


def nlm_weights_at(
    noisy: ImageGrid,
    clean: ImageGrid | None,
    params: NlmParams,
    i: int,
    j: int,
) -> np.ndarray:
    """Weights w_{i,j}(m, l) of every candidate (m, l) for one reference pixel."""
    _check_sizes(noisy.n, params)
    reference, candidate = _images(noisy, clean, params)
    return _weights_at(reference, _patch_stack(candidate, params.delta), params, i, j)


def nlm_denoise_naive(
    noisy: ImageGrid,
    clean: ImageGrid | None,
    params: NlmParams,
) -> ImageGrid:
    """Pixel-by-pixel NLM that compares every patch pair directly. Reference only."""
    n = noisy.n
    _check_sizes(n, params)
    reference, candidate = _images(noisy, clean, params)
    stack = _patch_stack(candidate, params.delta)
    out = np.empty_like(noisy.data)
    for i in range(n):
        for j in range(n):
            weight = _weights_at(reference, stack, params, i, j)
            out[i, j] = np.sum(weight * noisy.data) / np.sum(weight)
    return ImageGrid(out)


# ── Parameter rules ──────────────────────────────────────────────────────


def default_params(n: int, epsilon: float, sigma: float) -> NlmParams:
    """delta = max(1, ceil(2 (ln n)^{1/2 + eps})), t = 2 sigma^2 / (ln n)^{eps/2}."""
    if n < 3:
        raise DomainError(f"default NLM parameters need n >= 3, got {n}")
    if epsilon <= 0:
        raise DomainError(f"epsilon must be > 0, got {epsilon}")
    log_n = math.log(n)
    delta = max(1, math.ceil(2.0 * log_n ** (0.5 + epsilon)))
    t = 2.0 * sigma**2 / log_n ** (epsilon / 2.0)
    return NlmParams(delta=delta, t=t, sigma=sigma, epsilon=epsilon)


def tapered_default_params(n: int, sigma: float) -> NlmParams:
    """delta = ceil(2 ln n), weights min(1, exp(-max(d^2 - 2 sigma^2, 0) ln n / 2)).

    The bandwidth h^2 = 2 / ln n makes a unit excess distance weigh about
    n^{-1/2}. Tapered weights ignore t; it is set to h^2.
    """
    if n < 3:
        raise DomainError(f"tapered NLM parameters need n >= 3, got {n}")
    log_n = math.log(n)
    bandwidth = 2.0 / log_n
    return NlmParams(
        delta=math.ceil(2.0 * log_n),
        t=bandwidth,
        sigma=sigma,
        weight_kind="tapered",
        taper_alpha=1.0,
        taper_bandwidth=bandwidth,
    )


# ── Synthetic-patch Monte Carlo ──────────────────────────────────────────


def _synthetic_distances(
    true_dist_sq: float,
    sigma: float,
    delta: int,
    trials: int,
    seed: int,
):
    """Yield chunks of noisy distances between patches whose clean difference is
    sqrt(true_dist_sq) at every non-center offset. Each noisy difference is
    N(sqrt(true_dist_sq), 2 sigma^2)."""
    rho_sq = (2 * delta + 1) ** 2 - 1
    rng = generator(NoiseSpec(sigma=sigma, master_seed=seed, trial_index=0, stream=PATCH_STREAM))
    shift = math.sqrt(true_dist_sq)
    chunk = max(1, _CHUNK_VALUES // rho_sq)
    remaining = trials
    while remaining > 0:
        size = min(chunk, remaining)
        diffs = shift + math.sqrt(2.0) * sigma * rng.standard_normal((size, rho_sq))
        yield np.mean(diffs**2, axis=1)
        remaining -= size


def pass_probability(
    true_dist_sq: float,
    sigma: float,
    delta: int,
    threshold: float,
    trials: int = 10_000,
    seed: int = 0,
) -> float:
    """Monte Carlo P(d^2(y, y) <= threshold) for patches at a given clean distance."""
    if trials < _MIN_PASS_TRIALS:
        raise DomainError(f"pass_probability needs at least {_MIN_PASS_TRIALS} trials, got {trials}")
    if math.isinf(threshold) and threshold > 0:
        return 1.0
    passed = sum(
        int(np.count_nonzero(d <= threshold))
        for d in _synthetic_distances(true_dist_sq, sigma, delta, trials, seed)
    )
    return passed / trials


def tapered_weight_mean(
    true_dist_sq: float,
    params: NlmParams,
    n_trials: int = 10_000,
    seed: int = 0,
) -> float:
    """Monte Carlo mean of the tapered weight for patches at a given clean distance."""
    if params.weight_kind != "tapered":
        raise DomainError("tapered_weight_mean needs weight_kind='tapered'")
    total = math.fsum(
        float(np.sum(_weights(d, params)))
        for d in _synthetic_distances(true_dist_sq, params.sigma, params.delta, n_trials, seed)
    )
    return total / n_trials
