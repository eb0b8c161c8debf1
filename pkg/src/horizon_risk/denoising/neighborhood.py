"""Yaroslavsky / SUSAN neighborhood filter and its semi-oracle variant."""

from __future__ import annotations

import math

import numpy as np

from horizon_risk.errors import DeltaTooLarge, MissingCleanImage
from horizon_risk.schemas.denoiser import YfParams
from horizon_risk.synthetic.grid import ImageGrid


def _offsets(n: int, params: YfParams) -> list[tuple[int, int]]:
    if params.range_filter:
        return [(dm, dl) for dm in range(n) for dl in range(n)]
    span = range(-params.delta, params.delta + 1)
    return [(dm, dl) for dm in span for dl in span]


def yaroslavsky(
    noisy: ImageGrid,
    clean: ImageGrid | None,
    params: YfParams,
) -> ImageGrid:
    """Photometrically weighted local average over a periodic (2 delta + 1)^2 window.

    w(m, l) = exp(-(y(m, l) - r)^2 / (2 tau^2)) with r = y(i, j), or r = x(i, j)
    when params.oracle is set. The range filter takes every pixel of the
    image as a neighbor exactly once.
    """
    if params.oracle and clean is None:
        raise MissingCleanImage("the semi-oracle Yaroslavsky filter needs the clean image")
    n = noisy.n
    if not params.range_filter and 2 * params.delta + 1 > n:
        raise DeltaTooLarge(f"window side {2 * params.delta + 1} exceeds image size {n}")

    y = noisy.data
    reference = clean.data if params.oracle else y
    scale = 2.0 * params.tau**2
    offsets = _offsets(n, params)

    # Oracle weights can all underflow; shift exponents so the largest is 0.
    shift = np.zeros_like(y)
    if params.oracle and math.isfinite(params.tau):
        shift = np.full_like(y, np.inf)
        for dm, dl in offsets:
            gap = np.roll(y, (dm, dl), axis=(0, 1)) - reference
            np.minimum(shift, gap * gap / scale, out=shift)

    numerator = np.zeros_like(y)
    denominator = np.zeros_like(y)
    for dm, dl in offsets:
        neighbor = np.roll(y, (dm, dl), axis=(0, 1))
        weight = np.exp(-((neighbor - reference) ** 2) / scale + shift)
        numerator += weight * neighbor
        denominator += weight
    return ImageGrid(numerator / denominator)


def yf_weight_mean(sigma: float, tau: float, gap: float) -> float:
    """E exp(-(Z + gap)^2 / (2 tau^2)) for Z ~ N(0, sigma^2).

    Equals tau * exp(-gap^2 / (2 (sigma^2 + tau^2))) / sqrt(sigma^2 + tau^2);
    gap is |x(i, j) - x(m, l)|, 0 for same-side pairs and 1 across the edge.
    """
    spread = sigma**2 + tau**2
    return tau * math.exp(-(gap**2) / (2.0 * spread)) / math.sqrt(spread)
