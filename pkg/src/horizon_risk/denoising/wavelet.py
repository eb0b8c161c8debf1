"""Orthonormal 2D Haar transform with hard thresholding."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import pywt

from horizon_risk.errors import DomainError, NotPowerOfTwo
from horizon_risk.synthetic.grid import ImageGrid

_WAVELET = "haar"
_MODE = "periodization"


@dataclass(frozen=True)
class WaveletCoeffs:
    """Full-depth Haar coefficients in Mallat layout; coeffs[0, 0] is the approximation."""

    coeffs: np.ndarray
    levels: int
    slices: list = field(repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.coeffs.shape[0]


def _levels(n: int) -> int:
    if n < 2 or n & (n - 1):
        raise NotPowerOfTwo(f"the Haar transform needs n = 2^k with k >= 1, got {n}")
    return n.bit_length() - 1


def haar2_forward(image: ImageGrid) -> WaveletCoeffs:
    levels = _levels(image.n)
    tree = pywt.wavedec2(image.data, _WAVELET, mode=_MODE, level=levels)
    coeffs, slices = pywt.coeffs_to_array(tree)
    return WaveletCoeffs(coeffs=coeffs, levels=levels, slices=slices)


def haar2_inverse(coeffs: WaveletCoeffs) -> ImageGrid:
    tree = pywt.array_to_coeffs(coeffs.coeffs, coeffs.slices, output_format="wavedec2")
    return ImageGrid(pywt.waverec2(tree, _WAVELET, mode=_MODE))


def hard_threshold(coeffs: WaveletCoeffs, theta: float) -> WaveletCoeffs:
    """Zero every detail coefficient with |c| <= theta; the approximation is kept."""
    if theta < 0:
        raise DomainError(f"threshold must be >= 0, got {theta}")
    kept = np.where(np.abs(coeffs.coeffs) > theta, coeffs.coeffs, 0.0)
    kept[0, 0] = coeffs.coeffs[0, 0]
    return WaveletCoeffs(coeffs=kept, levels=coeffs.levels, slices=coeffs.slices)


def universal_threshold(n: int, sigma: float) -> float:
    """sigma * sqrt(2 ln N) for N = n^2 coefficients."""
    return sigma * math.sqrt(2.0 * math.log(n * n))


def wavelet_denoise(noisy: ImageGrid, sigma: float, theta: float | None = None) -> ImageGrid:
    """Inverse Haar of the hard-thresholded forward Haar; theta defaults to the universal threshold."""
    if theta is None:
        theta = universal_threshold(noisy.n, sigma)
    return haar2_inverse(hard_threshold(haar2_forward(noisy), theta))
