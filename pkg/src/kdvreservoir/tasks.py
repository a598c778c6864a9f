"""Benchmark tasks: XNOR classification and sigmoid regression."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .encoding import ContinuousFeature, DiscreteFeature, FeatureSpec

SIGMOID_DOMAIN = (-6.0, 6.0)


@dataclass
class Dataset:
    """Observations, targets, and the feature layout they conform to."""

    observations: np.ndarray  # (n_obs, n_features)
    targets: np.ndarray  # (n_obs,)
    spec: FeatureSpec
    name: str = ""

    def __post_init__(self):
        self.observations = np.atleast_2d(np.asarray(self.observations, dtype=float))
        self.targets = np.asarray(self.targets, dtype=float)
        if len(self.observations) != len(self.targets):
            raise ValueError("observations and targets must have equal length")
        if self.observations.shape[1] != len(self.spec.features):
            raise ValueError("observation width does not match feature spec")
        seen = {tuple(row) for row in self.observations}
        if len(seen) != len(self.observations):
            raise ValueError("observations must be pairwise distinct")

    def __len__(self) -> int:
        return len(self.observations)


def xnor_dataset() -> Dataset:
    """The four (A, B) input pairs with targets 1 iff A == B."""
    obs = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=float)
    targets = np.array([1.0, 0.0, 0.0, 1.0])
    spec = FeatureSpec([DiscreteFeature(2), DiscreteFeature(2)])
    return Dataset(obs, targets, spec, name="xnor")


def sigmoid(x):
    return 1.0 / (1.0 + np.exp(-np.asarray(x, dtype=float)))


def sigmoid_dataset(n_train: int = 8, digit_precision: int = 3) -> Dataset:
    """Equally spaced sigmoid samples on [-6, 6], endpoints included."""
    if n_train < 2:
        raise ValueError(f"need at least 2 training points, got {n_train}")
    lo, hi = SIGMOID_DOMAIN
    xs = np.linspace(lo, hi, n_train)
    spec = FeatureSpec([ContinuousFeature(digit_precision, lo, hi)])
    return Dataset(xs[:, None], sigmoid(xs), spec, name="sigmoid")


def test_points(n: int, seed: int) -> np.ndarray:
    """Uniform test inputs on the sigmoid domain, reproducible by seed."""
    if n < 1:
        raise ValueError(f"need at least 1 test point, got {n}")
    lo, hi = SIGMOID_DOMAIN
    rng = np.random.default_rng(seed)
    return rng.uniform(lo, hi, size=n)


def mse(predictions, targets) -> float:
    predictions = np.asarray(predictions, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if predictions.shape != targets.shape or predictions.size == 0:
        raise ValueError("predictions and targets must be non-empty and equal length")
    return float(np.mean((predictions - targets) ** 2))


@dataclass
class CorrelationReport:
    """Fitness-vs-MSE relationship across an archive, in log-log space."""

    slope: float
    intercept: float
    r_squared: float
    spearman_rho: float
    spearman_p: float
    n_pairs: int


class InsufficientDataError(ValueError):
    pass


DET_NOISE_FLOOR = 1e-12
"""Determinant magnitudes below this are numerically indistinguishable from a
singular matrix in float64; such readouts are trained by truncated-SVD least
squares rather than an exact solve, so their accuracy says nothing about the
separability the fitness measures."""


def fitness_mse_correlation(pairs, min_fitness: float = DET_NOISE_FLOOR) -> CorrelationReport:
    """Log-log regression and rank correlation of (fitness, test MSE) pairs.

    Pairs with fitness below ``min_fitness`` (numerically singular readouts)
    or non-positive MSE are excluded (log space); at least 10 valid pairs are
    required.
    """
    arr = np.asarray(list(pairs), dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("expected a sequence of (fitness, mse) pairs")
    valid = arr[(arr[:, 0] > min_fitness) & (arr[:, 1] > 0)]
    if len(valid) < 10:
        raise InsufficientDataError(
            f"need >= 10 pairs with positive fitness and MSE, got {len(valid)}"
        )
    log_f = np.log10(valid[:, 0])
    log_m = np.log10(valid[:, 1])
    fit = stats.linregress(log_f, log_m)
    rho, p = stats.spearmanr(valid[:, 0], valid[:, 1])
    return CorrelationReport(
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r_squared=float(fit.rvalue**2),
        spearman_rho=float(rho),
        spearman_p=float(p),
        n_pairs=len(valid),
    )
