"""MAP-Elites search over genotypes.

The archive is a fixed 2D grid over (mean, std) of the encoding wave
parameters seen during an evaluation.  Offspring are generated on the
coordinator (parent choice and mutation noise drawn from one master RNG
in a fixed order) and evaluated in fixed-size batches, so the result is
bit-identical for any worker count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed

from .encoding import Genotype
from .reservoir import EvaluationResult

# Offspring per dispatch; deliberately independent of the worker count so
# that parallelism cannot change the search trajectory.
BATCH_SIZE = 32


@dataclass(frozen=True)
class Descriptor:
    mean: float
    std: float

    def __post_init__(self):
        if not (np.isfinite(self.mean) and np.isfinite(self.std)) or self.std < 0:
            raise ValueError(f"bad descriptor ({self.mean}, {self.std})")


def compute_descriptor(result: EvaluationResult) -> Descriptor:
    """Population mean/std of the encoding parameters of one evaluation."""
    if result.diverged:
        raise ValueError("diverged evaluations have no descriptor")
    samples = np.asarray(result.descriptor_samples, dtype=float)
    if samples.size == 0:
        raise ValueError("no descriptor samples recorded")
    return Descriptor(float(samples.mean()), float(samples.std()))


@dataclass
class Individual:
    genotype: Genotype
    fitness: float
    descriptor: Descriptor
    eval_index: int


@dataclass
class LogEntry:
    eval_index: int
    fitness: float
    cell: tuple[int, int] | None
    accepted: bool
    status: str


class Archive:
    """Best-individual-per-cell grid over the 2D descriptor space."""

    def __init__(
        self,
        grid_shape: tuple[int, int],
        mean_range: tuple[float, float],
        std_range: tuple[float, float],
    ):
        if min(grid_shape) < 1:
            raise ValueError(f"bad archive shape {grid_shape}")
        self.grid_shape = grid_shape
        self.mean_range = mean_range
        self.std_range = std_range
        self.cells: dict[tuple[int, int], Individual] = {}

    def cell_index(self, descriptor: Descriptor) -> tuple[int, int]:
        """Bin a descriptor; out-of-range values clamp to the edge bins."""
        def bin_of(value, lo, hi, n):
            if hi <= lo:
                return 0
            b = int((value - lo) / (hi - lo) * n)
            return min(max(b, 0), n - 1)

        rows, cols = self.grid_shape
        return (
            bin_of(descriptor.mean, *self.mean_range, rows),
            bin_of(descriptor.std, *self.std_range, cols),
        )

    def insert(self, individual: Individual) -> bool:
        """Store the individual iff it strictly beats its cell incumbent."""
        cell = self.cell_index(individual.descriptor)
        incumbent = self.cells.get(cell)
        if incumbent is None or individual.fitness > incumbent.fitness:
            self.cells[cell] = individual
            return True
        return False

    def __len__(self) -> int:
        return len(self.cells)

    def individuals(self) -> list[Individual]:
        return [self.cells[c] for c in sorted(self.cells)]

    def best(self) -> Individual | None:
        if not self.cells:
            return None
        return max(self.cells.values(), key=lambda ind: ind.fitness)


@dataclass(frozen=True)
class EvoConfig:
    budget: int
    init_count: int = 100
    sigma: float = 0.1
    seed: int = 0
    grid_shape: tuple[int, int] = (32, 32)
    workers: int = 1

    def __post_init__(self):
        if not self.budget >= self.init_count >= 1:
            raise ValueError("need budget >= init_count >= 1")
        if self.sigma < 0:
            raise ValueError(f"sigma must be non-negative, got {self.sigma}")


def mutate(parent: Genotype, sigma: float, rng: np.random.Generator) -> Genotype:
    """Add independent Gaussian noise to every gene, clamping to [0, 1]."""
    vec = parent.as_vector()
    child = np.clip(vec + rng.normal(0.0, sigma, size=vec.size), 0.0, 1.0)
    return Genotype.from_vector(child, parent.times.size, parent.scheme)


def run(evaluator, config: EvoConfig) -> tuple[Archive, list[LogEntry]]:
    """MAP-Elites main loop.

    ``evaluator`` must provide ``random_genotype(rng)``, ``evaluate``
    (alias ``__call__``) and ``descriptor_ranges``; see
    ReservoirEvaluator.  Returns the final archive and the full
    per-evaluation log.
    """
    rng = np.random.default_rng(config.seed)
    mean_range, std_range = evaluator.descriptor_ranges
    archive = Archive(config.grid_shape, mean_range, std_range)
    log: list[LogEntry] = []
    evals_done = 0

    def process(results):
        nonlocal evals_done
        for result in results:
            ind_index = evals_done
            evals_done += 1
            if result.diverged:
                log.append(LogEntry(ind_index, 0.0, None, False, result.status))
                continue
            desc = compute_descriptor(result)
            genotype = result._genotype  # attached below before evaluation
            ind = Individual(genotype, result.fitness, desc, ind_index)
            accepted = archive.insert(ind)
            log.append(
                LogEntry(ind_index, result.fitness, archive.cell_index(desc), accepted, result.status)
            )

    def evaluate_batch(parallel, genotypes):
        if parallel is None:
            results = [evaluator(g) for g in genotypes]
        else:
            results = parallel(delayed(evaluator)(g) for g in genotypes)
        for g, r in zip(genotypes, results):
            r._genotype = g
        return results

    parallel = Parallel(n_jobs=config.workers) if config.workers != 1 else None
    while evals_done < config.budget:
        remaining = config.budget - evals_done
        n_init_left = max(config.init_count - evals_done, 0)
        size = min(BATCH_SIZE, remaining, n_init_left or remaining)
        batch = []
        elites = archive.individuals()
        for _ in range(size):
            if evals_done + len(batch) < config.init_count or not elites:
                batch.append(evaluator.random_genotype(rng))
            else:
                parent = elites[rng.integers(len(elites))]
                batch.append(mutate(parent.genotype, config.sigma, rng))
        process(evaluate_batch(parallel, batch))
    return archive, log
