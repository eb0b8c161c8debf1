"""NoiseSpec: sigma plus the (seed, trial, stream) key of a noise substream."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field


class NoiseSpec(BaseModel):
    """Identifies one iid N(0, sigma^2) noise field.

    Identical specs always yield identical fields; distinct trial_index or
    stream values yield independent fields.
    """

    model_config = ConfigDict(frozen=True)

    sigma: float = Field(gt=0.0)
    master_seed: int = Field(ge=0, lt=2**64)
    trial_index: int = Field(ge=0)
    stream: int = Field(default=0, ge=0)
