from .contour import ContourKind, EdgeContour
from .denoiser import DenoiserSpec, NlmParams, YfParams
from .noise import NoiseSpec
from .run import RunConfig

__all__ = [
    "ContourKind",
    "DenoiserSpec",
    "EdgeContour",
    "NlmParams",
    "NoiseSpec",
    "RunConfig",
    "YfParams",
]
