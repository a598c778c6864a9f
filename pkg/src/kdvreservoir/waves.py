"""Analytic wave profiles: soliton, cnoidal waves, and input windowing."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .grid import SpatialGrid, WaveField

DEFAULT_DISPERSION = 1.0 / 3.0


def soliton_velocity(u0: float, us: float, ks: float, dispersion: float = DEFAULT_DISPERSION) -> float:
    """Soliton speed implied by rest height, peak height and wavenumber."""
    return u0 + (2.0 / 3.0) * us - 4.0 * abs(dispersion) * ks**2


def cnoidal_velocity(epsilon: float, k: float, u0: float, dispersion: float = DEFAULT_DISPERSION) -> float:
    """Cnoidal wave speed implied by amplitude, frequency and rest height."""
    return u0 + (2.0 / 3.0) * epsilon - 4.0 * abs(dispersion) * k**2


@dataclass(frozen=True)
class SolitonParams:
    """sech^2 solitary wave riding on rest height u0.

    The velocity is derived, never stored, so the speed constraint holds
    by construction.
    """

    u0: float = 1.0
    us: float = 1.0
    ks: float = 0.5
    center: float = 0.0
    dispersion: float = DEFAULT_DISPERSION

    def __post_init__(self):
        if self.us <= 0:
            raise ValueError(f"soliton height must be positive, got {self.us}")
        if self.ks <= 0:
            raise ValueError(f"soliton wavenumber must be positive, got {self.ks}")

    @property
    def velocity(self) -> float:
        return soliton_velocity(self.u0, self.us, self.ks, self.dispersion)


@dataclass(frozen=True)
class CnoidalParams:
    """cos^2 traveling wave used to encode one input component."""

    epsilon: float
    k: float
    u0: float = 1.0
    phase_center: float = 0.0
    dispersion: float = DEFAULT_DISPERSION

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError(f"cnoidal amplitude must be non-negative, got {self.epsilon}")
        if self.k <= 0:
            raise ValueError(f"cnoidal frequency must be positive, got {self.k}")

    @property
    def velocity(self) -> float:
        return cnoidal_velocity(self.epsilon, self.k, self.u0, self.dispersion)


@dataclass(frozen=True)
class WindowParams:
    """Super-Gaussian envelope confining inputs to |x| ~ scale."""

    scale: float = 20.0
    order: int = 8

    def __post_init__(self):
        if self.scale <= 0:
            raise ValueError(f"window scale must be positive, got {self.scale}")
        if self.order <= 0 or self.order % 2 != 0:
            raise ValueError(f"window order must be a positive even integer, got {self.order}")


def soliton_profile(params: SolitonParams, grid: SpatialGrid, t: float = 0.0) -> WaveField:
    """u0 + us * sech^2[ks (x - center - v t)] sampled on the grid."""
    arg = params.ks * (grid.points - params.center - params.velocity * t)
    heights = params.u0 + params.us / np.cosh(arg) ** 2
    return WaveField(grid, heights, time=t)


def cnoidal_profile(params: CnoidalParams, grid: SpatialGrid, t: float = 0.0) -> WaveField:
    """eps * cos^2[k (x - phase_center - v t)] on the grid; no rest offset."""
    arg = params.k * (grid.points - params.phase_center - params.velocity * t)
    heights = params.epsilon * np.cos(arg) ** 2
    return WaveField(grid, heights, time=t)


def super_gaussian(grid: SpatialGrid, params: WindowParams) -> np.ndarray:
    """exp[-(x/scale)^order] per grid point; centered at x = 0."""
    return np.exp(-((grid.points / params.scale) ** params.order))


def build_initial_condition(
    waves: Sequence[CnoidalParams],
    soliton: SolitonParams,
    window: WindowParams,
    grid: SpatialGrid,
) -> WaveField:
    """Soliton background plus the windowed cnoidal superposition at t=0.

    The window attenuates only the encoded input waves, not the soliton.
    """
    heights = soliton_profile(soliton, grid, t=0.0).heights
    if waves:
        total = np.zeros(grid.num_points)
        for w in waves:
            total += cnoidal_profile(w, grid, t=0.0).heights
        heights = heights + super_gaussian(grid, window) * total
    return WaveField(grid, heights, time=0.0)
