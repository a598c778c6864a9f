import numpy as np
import pytest

from kdvreservoir.encoding import AMPLITUDE, EncodingBounds, Genotype
from kdvreservoir.grid import SpatialGrid
from kdvreservoir.reservoir import (
    ReservoirConfig,
    ReservoirEvaluator,
    fitness,
    train,
)
from kdvreservoir.solver import DetectionConfig, SolverParams
from kdvreservoir.tasks import xnor_dataset
from kdvreservoir.waves import SolitonParams


class TestFitness:
    def test_identity_matrix(self):
        assert fitness(np.eye(4)) == pytest.approx(1.0)

    def test_diagonal_matrix(self):
        assert fitness(np.diag([2.0, 3.0])) == pytest.approx(6.0)

    def test_duplicate_rows_are_singular(self, rng):
        r = rng.random((4, 4))
        r[2] = r[0]
        assert fitness(r) == pytest.approx(0.0, abs=1e-14)

    def test_permuted_rows_preserve_fitness(self, rng):
        r = rng.random((5, 5))
        perm = rng.permutation(5)
        assert fitness(r[perm]) == pytest.approx(fitness(r))

    def test_non_square_rejected(self):
        with pytest.raises(ValueError):
            fitness(np.ones((2, 3)))


class TestTrain:
    def test_identity_solve(self):
        readout = train(np.eye(4), [1.0, 0.0, 0.0, 1.0])
        np.testing.assert_allclose(readout.weights, [1.0, 0.0, 0.0, 1.0])
        assert readout.exact

    def test_diagonal_solve(self):
        readout = train(np.diag([2.0, 4.0]), [2.0, 8.0])
        np.testing.assert_allclose(readout.weights, [1.0, 2.0])

    def test_round_trip_recovers_weights(self, rng):
        r = rng.random((4, 4)) + 4 * np.eye(4)
        w_true = rng.random(4)
        readout = train(r, r @ w_true)
        np.testing.assert_allclose(readout.weights, w_true, atol=1e-10)

    def test_singular_matrix_falls_back_to_least_squares(self):
        r = np.ones((3, 3))
        readout = train(r, [1.0, 1.0, 1.0])
        assert not readout.exact
        assert np.all(np.isfinite(readout.weights))

    def test_exact_solve_interpolates_targets(self, rng):
        r = rng.random((6, 6)) + 6 * np.eye(6)
        y = rng.random(6)
        readout = train(r, y)
        np.testing.assert_allclose(r @ readout.weights, y, atol=1e-8)
        assert readout.residual < 1e-8


class TestEvaluation:
    def test_xnor_matrix_is_4x4(self, xnor_evaluator, rng):
        g = xnor_evaluator.random_genotype(rng)
        r = xnor_evaluator.build_readout_matrix(g)
        assert r.shape == (4, 4)

    def test_evaluation_is_deterministic(self, xnor_evaluator, rng):
        g = xnor_evaluator.random_genotype(rng)
        r1 = xnor_evaluator.evaluate(g)
        r2 = xnor_evaluator.evaluate(g)
        assert r1.fitness == r2.fitness
        np.testing.assert_array_equal(r1.readout, r2.readout)

    def test_identical_observations_give_identical_rows(self, xnor_evaluator, rng):
        g = xnor_evaluator.random_genotype(rng)
        rows = xnor_evaluator.readout_rows(np.array([[0.0, 1.0], [0.0, 1.0]]), g)
        np.testing.assert_array_equal(rows[0], rows[1])

    def test_zero_amplitude_genotype_has_fitness_exactly_zero(self, xnor_evaluator):
        g = Genotype(
            times=np.linspace(0.1, 0.9, 4),
            genes=np.zeros(xnor_evaluator.num_encoding_genes),
            scheme=AMPLITUDE,
        )
        result = xnor_evaluator.evaluate(g)
        assert result.fitness == 0.0
        assert not result.diverged

    def test_descriptor_samples_cover_all_waves(self, xnor_evaluator, rng):
        g = xnor_evaluator.random_genotype(rng)
        result = xnor_evaluator.evaluate(g)
        # 2 waves per observation, 4 observations
        assert result.descriptor_samples.shape == (8,)

    def test_divergence_yields_zero_fitness_and_no_nan(self):
        config = ReservoirConfig(
            grid=SpatialGrid.centered(80.0, 128),
            solver=SolverParams(dt=0.05),
            detection=DetectionConfig(25.0),
            soliton=SolitonParams(center=-20.0),
            bounds=EncodingBounds(amp_range=(0.0, 500.0), t_max=4.0),
        )
        evaluator = ReservoirEvaluator(config, xnor_dataset(), AMPLITUDE)
        g = Genotype(
            times=np.linspace(0.2, 0.9, 4),
            genes=np.full(evaluator.num_encoding_genes, 1.0),
            scheme=AMPLITUDE,
        )
        result = evaluator.evaluate(g)
        assert result.diverged
        assert result.fitness == 0.0
        assert np.isfinite(result.fitness)


class TestPredict:
    def test_training_points_reproduced_after_exact_train(self, xnor_evaluator, rng):
        for _ in range(10):
            g = xnor_evaluator.random_genotype(rng)
            readout, r = xnor_evaluator.train_on_dataset(g)
            if not readout.exact:
                continue
            preds = xnor_evaluator.predict(readout, g, xnor_evaluator.dataset.observations)
            np.testing.assert_allclose(preds, xnor_evaluator.dataset.targets, atol=1e-8)
            return
        pytest.skip("no well-conditioned genotype found in 10 draws")

    def test_zero_weights_predict_zero(self, xnor_evaluator, rng):
        from kdvreservoir.reservoir import LinearReadout

        g = xnor_evaluator.random_genotype(rng)
        readout = LinearReadout(weights=np.zeros(4), residual=0.0, exact=True)
        preds = xnor_evaluator.predict(readout, g, xnor_evaluator.dataset.observations)
        np.testing.assert_array_equal(preds, 0.0)
