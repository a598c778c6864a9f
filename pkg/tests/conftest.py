import numpy as np
import pytest

from kdvreservoir.encoding import EncodingBounds
from kdvreservoir.grid import SpatialGrid
from kdvreservoir.reservoir import ReservoirConfig, ReservoirEvaluator
from kdvreservoir.solver import DetectionConfig, SolverParams
from kdvreservoir.tasks import xnor_dataset
from kdvreservoir.waves import SolitonParams


@pytest.fixture(scope="session")
def fast_config():
    """Small, cheap reservoir setup for unit tests."""
    return ReservoirConfig(
        grid=SpatialGrid.centered(80.0, 128),
        solver=SolverParams(dt=0.05),
        detection=DetectionConfig(25.0),
        soliton=SolitonParams(center=-20.0),
        bounds=EncodingBounds(t_max=4.0),
    )


@pytest.fixture(scope="session")
def xnor_evaluator(fast_config):
    return ReservoirEvaluator(fast_config, xnor_dataset(), "amplitude")


@pytest.fixture
def rng():
    return np.random.default_rng(42)
