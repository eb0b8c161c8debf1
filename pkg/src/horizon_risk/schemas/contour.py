"""Edge contour h: [0,1] -> [0,1] defining a Horizon image f_h(t1, t2) = 1{t2 < h(t1)}."""

from __future__ import annotations

import math
from typing import Literal

import numpy as np
from numpy.polynomial import Polynomial
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

ContourKind = Literal["constant", "polynomial", "sinusoid"]


class EdgeContour(BaseModel):
    """A parametric edge contour with its declared Hoelder class.

    params by kind:
        constant:   [c]                              h(t) = c
        polynomial: [c0, c1, ...]                    h(t) = sum c_k t^k
        sinusoid:   [amplitude, freq, offset(, phase)]
                    h(t) = offset + amplitude * sin(2 pi freq t + phase)

    Constructing the model checks only the parameter shapes. Use
    ``synthetic.horizon.make_contour`` to also enforce range and smoothness.
    """

    model_config = ConfigDict(frozen=True)

    kind: ContourKind
    params: list[float] = Field(min_length=1)
    declared_alpha: float = Field(default=1.0, ge=1.0)
    declared_C: float = Field(default=1.0, gt=0.0)

    @field_validator("params")
    @classmethod
    def _finite(cls, value: list[float]) -> list[float]:
        if not all(math.isfinite(v) for v in value):
            raise ValueError("contour params must be finite")
        return value

    @model_validator(mode="after")
    def _arity(self) -> EdgeContour:
        count = len(self.params)
        if self.kind == "constant" and count != 1:
            raise ValueError(f"constant contour takes 1 param, got {count}")
        if self.kind == "sinusoid" and count not in (3, 4):
            raise ValueError(f"sinusoid contour takes 3 or 4 params, got {count}")
        return self

    @property
    def hoelder_order(self) -> int:
        """k = floor(alpha), the derivative order the Hoelder seminorm acts on."""
        return int(math.floor(self.declared_alpha))

    def __call__(self, t: np.ndarray | float) -> np.ndarray:
        return self.derivative(t, 0)

    def derivative(self, t: np.ndarray | float, k: int = 1) -> np.ndarray:
        """k-th derivative of h at t (k = 0 evaluates h)."""
        t = np.asarray(t, dtype=np.float64)
        if self.kind == "constant":
            value = self.params[0] if k == 0 else 0.0
            return np.full_like(t, value)
        if self.kind == "polynomial":
            poly = Polynomial(self.params)
            return poly.deriv(k)(t) if k else poly(t)
        amplitude, freq, offset = self.params[:3]
        phase = self.params[3] if len(self.params) == 4 else 0.0
        omega = 2.0 * math.pi * freq
        wave = amplitude * omega**k * np.sin(omega * t + phase + k * math.pi / 2.0)
        return wave + offset if k == 0 else wave

    def label(self) -> str:
        """Compact CLI-style description, e.g. ``sin:0.05,1,0.5``."""
        prefix = {"constant": "const", "polynomial": "poly", "sinusoid": "sin"}[self.kind]
        return f"{prefix}:" + ",".join(f"{p:g}" for p in self.params)
