"""Additive Gaussian noise from counter-based per-trial substreams.

Each (master_seed, trial_index, stream) triple keys its own Philox
generator through a SeedSequence, so any trial can be regenerated alone
and trials can run in any order or process.
"""

from __future__ import annotations

import numpy as np

from horizon_risk.schemas.noise import NoiseSpec

from .grid import ImageGrid

GENERATOR_NAME = (
    f"numpy.random.Philox-4x64-10 keyed by SeedSequence([master_seed, trial_index, stream]), "
    f"standard_normal (ziggurat), numpy {np.__version__}"
)

# Stream ids; tuning draws never reuse the risk trials' noise.
RISK_STREAM = 0
TUNING_STREAM = 1
PATCH_STREAM = 2


def generator(spec: NoiseSpec) -> np.random.Generator:
    seq = np.random.SeedSequence([spec.master_seed, spec.trial_index, spec.stream])
    return np.random.Generator(np.random.Philox(seq))


def noise_field(n: int, spec: NoiseSpec) -> np.ndarray:
    """The n x n field z with z[i, j] ~ N(0, sigma^2), filled row-major."""
    return spec.sigma * generator(spec).standard_normal((n, n))


def add_noise(image: ImageGrid, spec: NoiseSpec) -> ImageGrid:
    """y = x + z."""
    return ImageGrid(image.data + noise_field(image.n, spec))
