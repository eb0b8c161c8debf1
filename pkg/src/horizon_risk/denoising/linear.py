"""Periodic linear filters and the spectral constructions for the straight edge.

DFT convention for images: X(k1, k2) = (1/n) * sum x[l1, l2] e^{-j2pi(k1 l1 + k2 l2)/n},
with k1 running along axis 0 (columns) and k2 along axis 1 (rows). Filter
responses G(k1, k2) = sum g[m, l] e^{-j2pi(k1 m + k2 l)/n} carry no 1/n factor,
so that the DFT of a filtered image is G * X.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from horizon_risk.errors import FilterError, KernelTooLarge, OddN
from horizon_risk.synthetic.grid import ImageGrid

ConvolutionMethod = Literal["direct", "fft", "auto"]

_SUM_TOL = 1e-12
_DIRECT_MAX_TAPS = 49


@dataclass(frozen=True)
class Kernel:
    """Square filter taps g(m, l) for m, l in [-halfwidth, halfwidth].

    weights[m + halfwidth, l + halfwidth] = g(m, l). Taps must sum to 1;
    with symmetric=True they must also be mirror-symmetric in both axes.
    """

    weights: np.ndarray
    symmetric: bool = False

    def __post_init__(self) -> None:
        weights = np.array(self.weights, dtype=np.float64)
        if weights.ndim != 2 or weights.shape[0] != weights.shape[1] or weights.shape[0] % 2 == 0:
            raise FilterError(f"kernel must be square with odd side, got shape {weights.shape}")
        if abs(weights.sum() - 1.0) > _SUM_TOL:
            raise FilterError(f"kernel weights sum to {weights.sum():.15g}, expected 1")
        if self.symmetric and not (
            np.allclose(weights, weights[::-1, :], rtol=0.0, atol=_SUM_TOL)
            and np.allclose(weights, weights[:, ::-1], rtol=0.0, atol=_SUM_TOL)
        ):
            raise FilterError("kernel flagged symmetric but g(m, l) != g(-m, l) or g(m, -l)")
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)

    @property
    def halfwidth(self) -> int:
        return self.weights.shape[0] // 2

    @property
    def side(self) -> int:
        return self.weights.shape[0]

    def rotated(self) -> Kernel:
        """The kernel turned by 90 degrees."""
        return Kernel(np.rot90(self.weights), symmetric=self.symmetric)


@dataclass(frozen=True)
class FrequencyResponse:
    """Complex amplitudes over DFT indices (k1, k2), k in 0..n-1."""

    values: np.ndarray

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)


def box_kernel(halfwidth: int) -> Kernel:
    """Uniform (2 hw + 1)^2 kernel, the running average."""
    if halfwidth < 0:
        raise FilterError(f"halfwidth must be >= 0, got {halfwidth}")
    side = 2 * halfwidth + 1
    return Kernel(np.full((side, side), 1.0 / side**2), symmetric=True)


def _embed(taps: np.ndarray, n: int) -> np.ndarray:
    """Place taps g(m, l) at (m mod n, l mod n) on an n x n periodic grid."""
    hw = taps.shape[0] // 2
    out = np.zeros((n, n), dtype=taps.dtype)
    offsets = np.arange(-hw, hw + 1) % n
    np.add.at(out, np.ix_(offsets, offsets), taps)
    return out


def _check_fits(image: ImageGrid, kernel: Kernel) -> None:
    if kernel.side > image.n:
        raise KernelTooLarge(f"kernel side {kernel.side} exceeds image size {image.n}")


def convolve_dft(image: ImageGrid, kernel: Kernel) -> ImageGrid:
    """Cyclic convolution by multiplication of DFTs."""
    _check_fits(image, kernel)
    spectrum = np.fft.fft2(image.data) * np.fft.fft2(_embed(kernel.weights, image.n))
    return ImageGrid(np.fft.ifft2(spectrum).real)


def convolve_periodic(
    image: ImageGrid,
    kernel: Kernel,
    method: ConvolutionMethod = "auto",
) -> ImageGrid:
    """out(i, j) = sum_{m, l} g(m, l) y((i - m) mod n, (j - l) mod n).

    "direct" sums shifted copies of the image, "fft" multiplies DFTs;
    "auto" uses direct summation for kernels of at most 7 x 7 taps.
    """
    _check_fits(image, kernel)
    if method == "fft" or (method == "auto" and kernel.side**2 > _DIRECT_MAX_TAPS):
        return convolve_dft(image, kernel)

    hw = kernel.halfwidth
    out = np.zeros_like(image.data)
    for m in range(-hw, hw + 1):
        for l in range(-hw, hw + 1):
            g = kernel.weights[m + hw, l + hw]
            if g != 0.0:
                out += g * np.roll(image.data, (m, l), axis=(0, 1))
    return ImageGrid(out)


# ── Spectral views ───────────────────────────────────────────────────────


def image_dft(image: ImageGrid) -> FrequencyResponse:
    """X = (1/n) * fft2(x)."""
    return FrequencyResponse(np.fft.fft2(image.data) / image.n)


def frequency_response(kernel: Kernel, n: int) -> FrequencyResponse:
    """G(k1, k2) sampled on the n x n DFT grid."""
    if kernel.side > n:
        raise KernelTooLarge(f"kernel side {kernel.side} exceeds grid size {n}")
    return FrequencyResponse(np.fft.fft2(_embed(kernel.weights, n)))


def halfplane_dft(n: int) -> FrequencyResponse:
    """Closed-form DFT of the h = 1/2 Horizon image.

    X(k1, k2) = 0 for k1 != 0; X(0, 0) = n/2; otherwise
    X(0, k2) = (1 - e^{-j pi k2}) / (1 - e^{-j 2 pi k2 / n}).
    """
    if n % 2:
        raise OddN(f"the half-plane image needs even n, got {n}")
    values = np.zeros((n, n), dtype=np.complex128)
    k2 = np.arange(1, n)
    values[0, 0] = n / 2
    values[0, 1:] = (1 - np.exp(-1j * np.pi * k2)) / (1 - np.exp(-2j * np.pi * k2 / n))
    return FrequencyResponse(values)


def optimal_row_response(n: int, sigma: float) -> np.ndarray:
    """G*(0, k2) minimizing the dominant risk term along the k1 = 0 row.

    1 at k2 = 0, 0 for even k2 > 0, and 1 / (1 + 4 pi^4 sigma^2 k^3 / n^2) for
    odd k2, where k = min(k2, n - k2) is the folded (aliased) frequency.
    """
    k2 = np.arange(n)
    folded = np.minimum(k2, n - k2)
    response = 1.0 / (1.0 + 4.0 * math.pi**4 * sigma**2 * folded.astype(float) ** 3 / n**2)
    response[(folded % 2 == 0) & (folded > 0)] = 0.0
    response[0] = 1.0
    return response


def linear_bias_floor(n: int, sigma: float) -> float:
    """Leading term (4 pi^4 s^2 / (1 + 4 pi^4 s^2))^2 * n^{-2/3} / 40 of the linear-filter risk."""
    c = 4.0 * math.pi**4 * sigma**2
    return (c / (1.0 + c)) ** 2 * n ** (-2.0 / 3.0) / 40.0


def isotropy_deviation(kernel: Kernel, n: int) -> float:
    """Largest departure of G from its mean over rings of equal radial frequency.

    Rings are bins of width 2 pi / n in sqrt(w1^2 + w2^2) with w = 2 pi * fftfreq(n).
    """
    response = frequency_response(kernel, n).values
    omega = 2.0 * math.pi * np.fft.fftfreq(n)
    radius = np.hypot(omega[:, None], omega[None, :])
    bins = np.rint(radius / (2.0 * math.pi / n)).astype(np.int64).ravel()
    counts = np.bincount(bins)
    ring_mean = (
        np.bincount(bins, weights=response.real.ravel())
        + 1j * np.bincount(bins, weights=response.imag.ravel())
    ) / np.maximum(counts, 1)
    return float(np.max(np.abs(response.ravel() - ring_mean[bins])))


def response_gradient_norm(kernel: Kernel, n: int) -> float:
    """max over the DFT grid of |grad_w G(w1, w2)|_2, from the analytic derivative.

    dG/dw1 = sum -j m g(m, l) e^{-j(w1 m + w2 l)}, likewise for w2.
    """
    if kernel.side > n:
        raise KernelTooLarge(f"kernel side {kernel.side} exceeds grid size {n}")
    hw = kernel.halfwidth
    taps = np.arange(-hw, hw + 1, dtype=np.float64)
    d1 = np.fft.fft2(_embed(-1j * taps[:, None] * kernel.weights, n))
    d2 = np.fft.fft2(_embed(-1j * taps[None, :] * kernel.weights, n))
    return float(np.max(np.sqrt(np.abs(d1) ** 2 + np.abs(d2) ** 2)))
