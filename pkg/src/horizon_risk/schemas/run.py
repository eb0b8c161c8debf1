"""RunConfig: one validated CLI invocation."""

from __future__ import annotations

import os
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, Field, model_validator

from .contour import EdgeContour

Command = Literal["render", "denoise", "sweep", "fit", "diagnose", "selftest"]


class RunConfig(BaseModel):
    """Every numeric field is checked here, before any computation starts."""

    command: Command
    contour: str = "half"
    alpha: float = Field(default=2.0, ge=1.0)
    holder_c: float | None = Field(default=None, gt=0.0)
    denoisers: list[str] = Field(default_factory=list)
    n_values: list[int] = Field(default_factory=list)
    sigma: float = Field(default=0.5, gt=0.0)
    trials: int = Field(default=50, ge=2)
    epsilon: float = Field(default=0.1, gt=0.0)
    master_seed: int = Field(default=0, ge=0, lt=2**64)
    output_path: Path | None = None
    input_path: Path | None = None
    emit_plot: bool = False
    allow_large_nlm: bool = False
    weighted: bool = False
    region_delta: int | None = Field(default=None, ge=1)
    tuning_trials: int = Field(default=10, ge=1)

    @model_validator(mode="after")
    def _fits_command(self) -> RunConfig:
        from horizon_risk.errors import HorizonRiskError
        from horizon_risk.evaluation.runner import FAMILIES, validate_sweep

        try:
            self.edge_contour()
        except HorizonRiskError as exc:
            raise ValueError(f"contour {self.contour!r}: {exc}") from exc

        unknown = [d for d in self.denoisers if d not in FAMILIES]
        if unknown:
            raise ValueError(f"unknown denoiser(s) {unknown}; expected from {', '.join(FAMILIES)}")

        if self.command in ("render", "denoise", "diagnose"):
            if len(self.n_values) != 1 or self.n_values[0] < 2:
                raise ValueError(f"{self.command} takes a single n >= 2")
        if self.command in ("denoise", "diagnose") and len(self.denoisers) != 1:
            raise ValueError(f"{self.command} takes exactly one denoiser")
        if self.command == "diagnose":
            if self.n_values[0] % 2:
                raise ValueError("diagnose needs an even n")
            if self.denoisers[0] not in ("nlm", "snlm"):
                raise ValueError("diagnose runs the nlm or snlm family")
        if self.command == "sweep":
            if not self.denoisers:
                raise ValueError("sweep needs at least one denoiser")
            try:
                for family in self.denoisers:
                    validate_sweep(family, self.n_values, allow_large_nlm=self.allow_large_nlm)
            except HorizonRiskError as exc:
                raise ValueError(str(exc)) from exc
        if self.command == "fit":
            if self.input_path is None:
                raise ValueError("fit needs an input CSV")
            if not self.input_path.is_file():
                raise ValueError(f"input CSV {self.input_path} does not exist")
            if not os.access(self.input_path, os.R_OK):
                raise ValueError(f"input CSV {self.input_path} is not readable")
        return self

    def edge_contour(self) -> EdgeContour:
        """The validated contour this run renders."""
        from horizon_risk.synthetic.contours import parse_contour

        return parse_contour(self.contour, self.alpha, self.holder_c)
