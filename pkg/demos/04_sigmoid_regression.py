"""Regression demo: learn the sigmoid from 8 points, test on 50.

The continuous input is written in 3 base-10 digits, one cnoidal wave
per digit.  After a short MAP-Elites run, every archived elite is scored
on a held-out test set to show the fitness / generalization link.
"""

from kdvreservoir.evolution import run
from kdvreservoir.experiments import ExperimentConfig, score_archive_mse
from kdvreservoir.tasks import fitness_mse_correlation, test_points

config = ExperimentConfig(task="regression", scheme="amplitude", budget=300)
evaluator = config.evaluator()
archive, _ = run(evaluator, config.evo_config(seed=0))
print(f"archive: {len(archive)} elites, best fitness {archive.best().fitness:.4g}")

xs = test_points(50, seed=config.test_seed)
scored = score_archive_mse(archive, evaluator, xs)
pairs = [(fit, err) for _, fit, err in scored]

print("\n  fitness      test MSE")
for fit, err in sorted(pairs, reverse=True)[:8]:
    print(f"  {fit:9.3g}    {err:.4f}")

try:
    rep = fitness_mse_correlation(pairs)
    print(
        f"\nSpearman rho={rep.spearman_rho:.3f} (p={rep.spearman_p:.3g}), "
        f"log-log slope={rep.slope:.3f} over {rep.n_pairs} elites"
    )
except ValueError as exc:
    print(f"\ncorrelation skipped: {exc}")
