"""Encode the four XNOR inputs as cnoidal waves and watch the probe.

Each input pair (A, B) becomes two cos^2 waves (one per feature) whose
amplitudes are selected by the feature values; the windowed superposition
plus the background soliton forms the initial condition.  We record the
wave height at the detection point over time for all four inputs and
print a coarse trace, which is what the readout matrix samples from.
"""

import numpy as np

from kdvreservoir.experiments import ExperimentConfig
from kdvreservoir.solver import integrate_probe
from kdvreservoir.waves import build_initial_condition

config = ExperimentConfig()  # desk-scale physical profile, XNOR task
evaluator = config.evaluator()
cfg = evaluator.config

rng = np.random.default_rng(0)
genotype = evaluator.random_genotype(rng)
print(f"genotype: {genotype.times.size} time genes + {genotype.genes.size} encoding genes\n")

for x in evaluator.dataset.observations:
    waves = evaluator.encode_observation(x, genotype)
    desc = ", ".join(f"(eps={w.epsilon:.2f}, k={w.k:.2f}, v={w.velocity:+.2f})" for w in waves)
    print(f"input {tuple(int(v) for v in x)} -> {desc}")
    initial = build_initial_condition(waves, cfg.soliton, cfg.window, cfg.grid)
    times, series = integrate_probe(
        initial.heights, cfg.grid, cfg.solver, cfg.detection, cfg.bounds.t_max
    )
    coarse = series[:: len(series) // 10]
    print("  probe:", " ".join(f"{h:5.2f}" for h in coarse))
