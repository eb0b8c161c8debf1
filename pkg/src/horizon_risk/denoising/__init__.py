from .dispatch import denoise
from .linear import (
    FrequencyResponse,
    Kernel,
    box_kernel,
    convolve_dft,
    convolve_periodic,
    frequency_response,
    halfplane_dft,
    image_dft,
    isotropy_deviation,
    linear_bias_floor,
    optimal_row_response,
    response_gradient_norm,
)
from .neighborhood import yaroslavsky, yf_weight_mean
from .nlm import (
    default_params,
    nlm_denoise,
    nlm_denoise_naive,
    nlm_weights_at,
    pass_probability,
    patch_distance,
    tapered_default_params,
    tapered_weight_mean,
)
from .wavelet import (
    WaveletCoeffs,
    haar2_forward,
    haar2_inverse,
    hard_threshold,
    universal_threshold,
    wavelet_denoise,
)

__all__ = [
    "FrequencyResponse",
    "Kernel",
    "WaveletCoeffs",
    "box_kernel",
    "convolve_dft",
    "convolve_periodic",
    "default_params",
    "denoise",
    "frequency_response",
    "haar2_forward",
    "haar2_inverse",
    "halfplane_dft",
    "hard_threshold",
    "image_dft",
    "isotropy_deviation",
    "linear_bias_floor",
    "nlm_denoise",
    "nlm_denoise_naive",
    "nlm_weights_at",
    "optimal_row_response",
    "pass_probability",
    "patch_distance",
    "response_gradient_norm",
    "tapered_default_params",
    "tapered_weight_mean",
    "universal_threshold",
    "wavelet_denoise",
    "yaroslavsky",
    "yf_weight_mean",
]
