"""Evolve XNOR encodings with MAP-Elites and inspect the archive.

A short budget keeps this demo around a minute; the acceptance-scale
experiments use 2000 evaluations and 5 seeds per encoding.  Afterwards
the best genotype's readout matrix is shown together with the exact
linear readout it admits.
"""

import numpy as np

from kdvreservoir.evolution import run
from kdvreservoir.experiments import ExperimentConfig
from kdvreservoir.reservoir import train

config = ExperimentConfig(task="xnor", scheme="amplitude", budget=300)
evaluator = config.evaluator()
archive, log = run(evaluator, config.evo_config(seed=0))

fits = [e.fitness for e in log]
print(f"evaluations: {len(log)}, archive cells filled: {len(archive)}")
print(f"best random-init fitness: {max(fits[:100]):.4g}")
print(f"best evolved fitness:     {archive.best().fitness:.4g}")

best = archive.best()
r = evaluator.build_readout_matrix(best.genotype)
print("\nreadout matrix of the best genotype:")
print(np.array_str(r, precision=3))

readout = train(r, evaluator.dataset.targets)
preds = evaluator.predict(readout, best.genotype, evaluator.dataset.observations)
print("\ntraining-set predictions (targets 1,0,0,1):", np.round(preds, 6))
labels = (preds >= 0.5).astype(int)
print("thresholded labels:", labels)
