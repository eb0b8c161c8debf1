"""Tests for the orthonormal Haar transform and hard thresholding."""

import math

import numpy as np
import pytest

from horizon_risk.denoising.wavelet import (
    haar2_forward,
    haar2_inverse,
    hard_threshold,
    universal_threshold,
    wavelet_denoise,
)
from horizon_risk.errors import DomainError, NotPowerOfTwo
from horizon_risk.schemas.noise import NoiseSpec
from horizon_risk.synthetic.grid import ImageGrid
from horizon_risk.synthetic.noise import add_noise


def _random(n, seed=0):
    return ImageGrid(np.random.default_rng(seed).standard_normal((n, n)))


class TestHaarTransform:
    def test_constant_image_has_no_details(self):
        coeffs = haar2_forward(ImageGrid(np.full((8, 8), 2.0)))
        assert coeffs.coeffs[0, 0] == pytest.approx(16.0)
        details = coeffs.coeffs.copy()
        details[0, 0] = 0.0
        assert np.max(np.abs(details)) < 1e-12

    @pytest.mark.parametrize("n", [2, 8, 32])
    def test_inverse_recovers_image(self, n):
        image = _random(n, seed=n)
        assert haar2_inverse(haar2_forward(image)).data == pytest.approx(image.data, abs=1e-12)

    def test_preserves_energy(self):
        image = _random(16, seed=3)
        coeffs = haar2_forward(image)
        assert np.sum(coeffs.coeffs**2) == pytest.approx(np.sum(image.data**2), rel=1e-12)

    def test_full_depth(self):
        assert haar2_forward(_random(16)).levels == 4

    @pytest.mark.parametrize("n", [6, 12])
    def test_needs_power_of_two(self, n):
        with pytest.raises(NotPowerOfTwo):
            haar2_forward(_random(n))


class TestHardThreshold:
    def test_small_details_zeroed(self):
        coeffs = haar2_forward(_random(8, seed=1))
        kept = hard_threshold(coeffs, 0.5).coeffs
        small = np.abs(coeffs.coeffs) <= 0.5
        small[0, 0] = False
        assert np.all(kept[small] == 0.0)
        assert np.all(kept[~small] == coeffs.coeffs[~small])

    def test_zero_threshold_is_identity(self):
        image = _random(8, seed=2)
        out = haar2_inverse(hard_threshold(haar2_forward(image), 0.0))
        assert out.data == pytest.approx(image.data, abs=1e-12)

    def test_infinite_threshold_gives_mean(self):
        image = _random(8, seed=4)
        out = wavelet_denoise(image, 1.0, theta=math.inf)
        assert out.data == pytest.approx(np.full((8, 8), image.data.mean()), abs=1e-12)

    def test_negative_threshold(self):
        with pytest.raises(DomainError):
            hard_threshold(haar2_forward(_random(4)), -0.1)


class TestWaveletDenoise:
    def test_universal_threshold(self):
        assert universal_threshold(64, 0.5) == pytest.approx(2.0393, abs=1e-4)

    def test_reduces_error_on_constant(self):
        clean = ImageGrid(np.full((64, 64), 0.5))
        before, after = [], []
        for trial in range(20):
            noisy = add_noise(clean, NoiseSpec(sigma=0.5, master_seed=8, trial_index=trial))
            before.append(noisy.mse(clean))
            after.append(wavelet_denoise(noisy, 0.5).mse(clean))
        assert np.mean(after) < np.mean(before)
