"""Run the denoiser a DenoiserSpec describes."""

from __future__ import annotations

import numpy as np

from horizon_risk.schemas.denoiser import DenoiserSpec
from horizon_risk.synthetic.grid import ImageGrid

from .linear import Kernel, box_kernel, convolve_periodic
from .neighborhood import yaroslavsky
from .nlm import nlm_denoise
from .wavelet import wavelet_denoise


def denoise(spec: DenoiserSpec, noisy: ImageGrid, clean: ImageGrid | None = None) -> ImageGrid:
    """Estimate the clean image from `noisy`; oracle variants also read `clean`."""
    if spec.kind == "identity":
        return noisy
    if spec.kind == "mean":
        return ImageGrid(np.full_like(noisy.data, noisy.data.mean()))
    if spec.kind == "box":
        return convolve_periodic(noisy, box_kernel(spec.halfwidth))
    if spec.kind == "linear":
        return convolve_periodic(noisy, Kernel(np.asarray(spec.kernel_weights)))
    if spec.kind == "yf":
        return yaroslavsky(noisy, clean, spec.yf)
    if spec.kind == "nlm":
        return nlm_denoise(noisy, clean, spec.nlm)
    return wavelet_denoise(noisy, spec.sigma, spec.theta)
