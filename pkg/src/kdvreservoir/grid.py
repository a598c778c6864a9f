"""Periodic 1D spatial grid and sampled wave fields."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform periodic grid for the spatial coordinate.

    The domain is [origin, origin + length) with ``num_points`` samples;
    the right endpoint is identified with the left one.
    """

    length: float
    num_points: int
    origin: float = 0.0

    def __post_init__(self):
        if self.length <= 0:
            raise ValueError(f"grid length must be positive, got {self.length}")
        if self.num_points < 16:
            raise ValueError(f"need at least 16 grid points, got {self.num_points}")

    @classmethod
    def centered(cls, length: float = 80.0, num_points: int = 1024) -> "SpatialGrid":
        """Grid spanning [-length/2, length/2)."""
        return cls(length=length, num_points=num_points, origin=-length / 2)

    @property
    def spacing(self) -> float:
        return self.length / self.num_points

    @property
    def points(self) -> np.ndarray:
        return self.origin + self.spacing * np.arange(self.num_points)

    @property
    def wavenumbers(self) -> np.ndarray:
        """Angular wavenumbers for the real FFT of a field on this grid."""
        return 2.0 * np.pi * np.fft.rfftfreq(self.num_points, d=self.spacing)

    def contains(self, position: float) -> bool:
        return self.origin <= position < self.origin + self.length

    def interp_weights(self, position: float) -> tuple[int, int, float]:
        """Indices (i0, i1) and fraction w such that
        u(position) ~ (1-w)*u[i0] + w*u[i1], with periodic wrap."""
        s = (position - self.origin) / self.spacing
        i0 = int(np.floor(s)) % self.num_points
        i1 = (i0 + 1) % self.num_points
        return i0, i1, s - np.floor(s)


class InvalidFieldError(ValueError):
    """Raised when a wave field contains non-finite heights."""


@dataclass
class WaveField:
    """Water height u sampled on a grid at a single instant."""

    grid: SpatialGrid
    heights: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        self.heights = np.asarray(self.heights, dtype=float)
        if self.heights.shape != (self.grid.num_points,):
            raise ValueError(
                f"heights shape {self.heights.shape} does not match grid "
                f"({self.grid.num_points} points)"
            )

    def validate(self) -> None:
        if not np.all(np.isfinite(self.heights)):
            raise InvalidFieldError("wave field contains non-finite heights")

    def copy(self) -> "WaveField":
        return WaveField(self.grid, self.heights.copy(), self.time)
