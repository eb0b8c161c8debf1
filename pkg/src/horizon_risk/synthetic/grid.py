"""ImageGrid: an n x n array of pixel values indexed (i, j) = (column, row)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from horizon_risk.errors import GridError


@dataclass(frozen=True)
class ImageGrid:
    """Pixel values x[i, j] averaged over [i/n, (i+1)/n) x [j/n, (j+1)/n).

    Axis 0 runs along t1 (column i), axis 1 along t2 (row j). The array is
    stored read-only so grids can be shared between trials.
    """

    data: np.ndarray

    def __post_init__(self) -> None:
        data = np.array(self.data, dtype=np.float64)
        if data.ndim != 2 or data.shape[0] != data.shape[1] or data.shape[0] < 1:
            raise GridError(f"expected a non-empty square 2D grid, got shape {data.shape}")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    def __getitem__(self, index: tuple[int, int]) -> float:
        return float(self.data[index])

    def mse(self, other: ImageGrid) -> float:
        """(1/n^2) * sum of squared differences to another grid of the same size."""
        if other.n != self.n:
            raise GridError(f"grid sizes differ: {self.n} vs {other.n}")
        return float(np.mean((self.data - other.data) ** 2))
