"""Shallow-water (KdV) reservoir computing with evolved hyper-parameters.

Input features are encoded as cnoidal waves riding alongside a soliton
on a periodic KdV domain; wave heights sampled at a detection point form
a readout matrix whose determinant measures linear separability.
MAP-Elites searches the encoding genes and readout times for
high-separability configurations.
"""

__version__ = "0.1.0"

from .encoding import (
    AMPLITUDE,
    ContinuousFeature,
    DiscreteFeature,
    EncodingBounds,
    FeatureSpec,
    FREQUENCY,
    Genotype,
    digits,
    encode,
    readout_times,
)
from .evolution import Archive, Descriptor, EvoConfig, Individual, mutate, run
from .grid import InvalidFieldError, SpatialGrid, WaveField
from .reservoir import (
    EvaluationResult,
    LinearReadout,
    ReservoirConfig,
    ReservoirEvaluator,
    fitness,
    train,
)
from .solver import (
    DetectionConfig,
    DivergenceError,
    SolverParams,
    conserved_mass,
    conserved_momentum,
    kdv_rhs,
    simulate_and_sample,
    step,
)
from .tasks import (
    Dataset,
    fitness_mse_correlation,
    mse,
    sigmoid,
    sigmoid_dataset,
    test_points,
    xnor_dataset,
)
from .waves import (
    CnoidalParams,
    SolitonParams,
    WindowParams,
    build_initial_condition,
    cnoidal_profile,
    cnoidal_velocity,
    soliton_profile,
    soliton_velocity,
    super_gaussian,
)

__all__ = [name for name in dir() if not name.startswith("_")]
