"""Denoiser parameter records and the tagged DenoiserSpec that selects one algorithm."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

WeightKind = Literal["hard", "tapered"]
OracleLevel = Literal["none", "semi", "full"]
SearchMode = Literal["full", "window"]
DenoiserKind = Literal["identity", "mean", "box", "linear", "yf", "nlm", "wavelet"]


class YfParams(BaseModel):
    """Yaroslavsky / SUSAN filter parameters.

    delta is the half-size of the square neighborhood; tau the photometric
    bandwidth (math.inf gives the box filter). oracle=True takes the
    reference value from the clean image (semi-oracle filter). range_filter
    widens the neighborhood to the whole image, each pixel counted once.
    """

    model_config = ConfigDict(frozen=True)

    delta: int = Field(ge=1)
    tau: float = Field(gt=0.0)
    oracle: bool = False
    range_filter: bool = False


class NlmParams(BaseModel):
    """Nonlocal means parameters.

    delta: patch half-size; t: threshold slack above the noise floor;
    sigma: noise sd used in the thresholds; epsilon: the rate parameter the
    defaults were derived from (informational). taper_alpha bounds tapered
    weights and taper_bandwidth is h^2 in exp(-excess / h^2).
    """

    model_config = ConfigDict(frozen=True)

    delta: int = Field(ge=1)
    t: float = Field(gt=0.0)
    sigma: float = Field(gt=0.0)
    weight_kind: WeightKind = "hard"
    oracle: OracleLevel = "none"
    search: SearchMode = "full"
    window: int | None = None
    epsilon: float | None = Field(default=None, gt=0.0)
    taper_alpha: float = Field(default=1.0, gt=0.0)
    taper_bandwidth: float = Field(default=1.0, gt=0.0)

    @model_validator(mode="after")
    def _window_given(self) -> NlmParams:
        if self.search == "window" and self.window is None:
            raise ValueError("search='window' requires a window half-size")
        return self

    @property
    def rho_sq(self) -> int:
        """Number of non-center patch offsets, (2 delta + 1)^2 - 1."""
        return (2 * self.delta + 1) ** 2 - 1

    @property
    def threshold(self) -> float:
        """Hard-weight threshold for this oracle level."""
        floor = {"none": 2.0, "semi": 1.0, "full": 0.0}[self.oracle]
        return floor * self.sigma**2 + self.t

    @property
    def noise_floor(self) -> float:
        """Expected distance between patches with identical clean content."""
        return {"none": 2.0, "semi": 1.0, "full": 0.0}[self.oracle] * self.sigma**2

    @property
    def tag(self) -> str:
        if self.weight_kind == "tapered":
            return "tapered"
        return {"none": "nlm", "semi": "snlm", "full": "fnlm"}[self.oracle]


class DenoiserSpec(BaseModel):
    """A tagged description of one denoising algorithm and its tuning."""

    model_config = ConfigDict(frozen=True)

    kind: DenoiserKind
    halfwidth: int | None = Field(default=None, ge=0)
    kernel_weights: list[list[float]] | None = None
    yf: YfParams | None = None
    nlm: NlmParams | None = None
    sigma: float | None = Field(default=None, gt=0.0)
    theta: float | None = Field(default=None, ge=0.0)

    @model_validator(mode="after")
    def _required_fields(self) -> DenoiserSpec:
        missing = {
            "box": self.halfwidth is None,
            "linear": self.kernel_weights is None,
            "yf": self.yf is None,
            "nlm": self.nlm is None,
            "wavelet": self.sigma is None and self.theta is None,
        }.get(self.kind, False)
        if missing:
            raise ValueError(f"denoiser kind {self.kind!r} is missing its parameters")
        return self

    @property
    def needs_clean(self) -> bool:
        """True for oracle variants that read the noise-free image."""
        if self.kind == "yf":
            return self.yf.oracle
        if self.kind == "nlm":
            return self.nlm.oracle != "none"
        return False

    @property
    def tag(self) -> str:
        """Short family tag written to result tables."""
        if self.kind == "yf":
            return "syf" if self.yf.oracle else "yf"
        if self.kind == "nlm":
            return self.nlm.tag
        return self.kind

    def label(self) -> str:
        """Tag plus the parameters that distinguish this instance."""
        if self.kind == "box":
            return f"box(hw={self.halfwidth})"
        if self.kind == "yf":
            extent = "all" if self.yf.range_filter else str(self.yf.delta)
            return f"{self.tag}(delta={extent},tau={self.yf.tau:g})"
        if self.kind == "nlm":
            return f"{self.tag}(delta={self.nlm.delta},t={self.nlm.t:.4g})"
        if self.kind == "wavelet" and self.theta is not None:
            return f"wavelet(theta={self.theta:.4g})"
        return self.tag
