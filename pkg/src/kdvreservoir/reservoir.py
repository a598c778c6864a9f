"""Genotype evaluation: simulate, read out, score, and train the readout.

One evaluation turns a genotype into an N x N readout matrix (one row
per training observation, one column per readout time), whose absolute
determinant is the separability fitness.  The linear readout is solved
in closed form whenever the matrix is well-conditioned.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import encoding as enc
from .encoding import EncodingBounds, FeatureSpec, Genotype
from .grid import SpatialGrid
from .solver import (
    DetectionConfig,
    DivergenceError,
    SolverParams,
    integrate_probe,
)
from .tasks import Dataset
from .waves import SolitonParams, WindowParams, build_initial_condition

COND_THRESHOLD = 1e10

STATUS_OK = "ok"
STATUS_DIVERGED = "diverged"


@dataclass(frozen=True)
class ReservoirConfig:
    """Physical setup shared by every evaluation in an experiment."""

    grid: SpatialGrid = field(default_factory=SpatialGrid.centered)
    solver: SolverParams = field(default_factory=SolverParams)
    detection: DetectionConfig = field(default_factory=lambda: DetectionConfig(25.0))
    soliton: SolitonParams = field(default_factory=lambda: SolitonParams(center=-20.0))
    window: WindowParams = field(default_factory=WindowParams)
    bounds: EncodingBounds = field(default_factory=EncodingBounds)

    def __post_init__(self):
        self.solver.check_stability(self.grid)
        if not self.grid.contains(self.detection.position):
            raise ValueError("detection position outside the grid domain")


@dataclass
class EvaluationResult:
    fitness: float
    readout: np.ndarray | None
    descriptor_samples: np.ndarray
    status: str = STATUS_OK

    @property
    def diverged(self) -> bool:
        return self.status == STATUS_DIVERGED


def fitness(readout_matrix: np.ndarray) -> float:
    """Absolute determinant of the readout matrix; 0 for singular ones."""
    r = np.asarray(readout_matrix, dtype=float)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise ValueError(f"readout matrix must be square, got shape {r.shape}")
    return float(abs(np.linalg.det(r)))


@dataclass
class LinearReadout:
    """Zero-bias linear map from a readout vector to a prediction."""

    weights: np.ndarray
    residual: float
    exact: bool

    def __call__(self, readouts: np.ndarray) -> np.ndarray:
        return np.asarray(readouts, dtype=float) @ self.weights


def train(readout_matrix: np.ndarray, targets) -> LinearReadout:
    """Solve R w = y exactly when R is well-conditioned, else least squares.

    Predictions are readout-row dot weights, so an exact solve
    reproduces every training target.
    """
    r = np.asarray(readout_matrix, dtype=float)
    y = np.asarray(targets, dtype=float)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise ValueError(f"readout matrix must be square, got shape {r.shape}")
    if y.shape != (r.shape[0],):
        raise ValueError("target length must match the readout matrix size")
    cond = np.linalg.cond(r)
    if np.isfinite(cond) and cond < COND_THRESHOLD:
        w = np.linalg.solve(r, y)
        exact = True
    else:
        w = np.linalg.lstsq(r, y, rcond=None)[0]
        exact = False
    residual = float(np.linalg.norm(r @ w - y))
    return LinearReadout(weights=w, residual=residual, exact=exact)


class ReservoirEvaluator:
    """Evaluates genotypes for one (config, dataset, scheme) triple.

    Stateless apart from its immutable configuration, so instances can be
    shipped to parallel workers and called concurrently.
    """

    def __init__(self, config: ReservoirConfig, dataset: Dataset, scheme: str):
        if scheme not in enc.SCHEMES:
            raise ValueError(f"unknown scheme {scheme!r}")
        self.config = config
        self.dataset = dataset
        self.scheme = scheme

    @property
    def spec(self) -> FeatureSpec:
        return self.dataset.spec

    @property
    def bounds(self) -> EncodingBounds:
        return self.config.bounds

    @property
    def num_time_genes(self) -> int:
        # square readout matrix: as many readouts as training observations
        return len(self.dataset)

    @property
    def num_encoding_genes(self) -> int:
        return self.spec.num_encoding_genes

    @property
    def descriptor_ranges(self) -> tuple[tuple[float, float], tuple[float, float]]:
        """(mean range, std range) of the encoding parameters."""
        lo, hi = (
            self.bounds.amp_range if self.scheme == enc.AMPLITUDE else self.bounds.freq_range
        )
        return (lo, hi), (0.0, (hi - lo) / 2.0)

    def random_genotype(self, rng: np.random.Generator) -> Genotype:
        return Genotype.random(self.num_time_genes, self.num_encoding_genes, self.scheme, rng)

    def encode_observation(self, x, genotype: Genotype):
        return enc.encode(
            x,
            genotype,
            self.spec,
            self.bounds,
            u0=self.config.soliton.u0,
            dispersion=self.config.solver.dispersion,
        )

    def _initial_heights(self, observations, genotype: Genotype):
        """Stacked initial fields (n_obs, n_points) and all wave parameters."""
        cfg = self.config
        stack = np.empty((len(observations), cfg.grid.num_points))
        all_waves = []
        for i, x in enumerate(observations):
            waves = self.encode_observation(x, genotype)
            all_waves.extend(waves)
            stack[i] = build_initial_condition(waves, cfg.soliton, cfg.window, cfg.grid).heights
        return stack, all_waves

    def readout_rows(self, observations, genotype: Genotype) -> np.ndarray:
        """Simulate each observation and sample at the readout times.

        Returns an (n_obs, n_times) matrix; raises DivergenceError if any
        simulation blows up.  All observations advance as one batch.
        """
        cfg = self.config
        times = enc.readout_times(genotype, self.bounds)
        heights, _ = self._initial_heights(observations, genotype)
        step_times, series = integrate_probe(
            heights, cfg.grid, cfg.solver, cfg.detection, float(times[-1])
        )
        # series: (n_steps+1, n_obs) -> interpolate each column at the times
        rows = np.empty((len(observations), times.size))
        for i in range(len(observations)):
            rows[i] = np.interp(times, step_times, series[:, i])
        return rows

    def build_readout_matrix(self, genotype: Genotype) -> np.ndarray:
        return self.readout_rows(self.dataset.observations, genotype)

    def evaluate(self, genotype: Genotype) -> EvaluationResult:
        """Fitness plus descriptor samples; divergence maps to fitness 0."""
        waves = []
        for x in self.dataset.observations:
            waves.extend(self.encode_observation(x, genotype))
        samples = enc.descriptor_values(waves, self.scheme)
        try:
            r = self.build_readout_matrix(genotype)
        except DivergenceError:
            return EvaluationResult(0.0, None, samples, status=STATUS_DIVERGED)
        return EvaluationResult(fitness(r), r, samples)

    __call__ = evaluate

    def predict(self, readout: LinearReadout, genotype: Genotype, xs) -> np.ndarray:
        """Out-of-sample predictions for a batch of observations."""
        xs = np.atleast_2d(np.asarray(xs, dtype=float))
        rows = self.readout_rows(xs, genotype)
        return readout(rows)

    def train_on_dataset(self, genotype: Genotype) -> tuple[LinearReadout, np.ndarray]:
        r = self.build_readout_matrix(genotype)
        return train(r, self.dataset.targets), r
