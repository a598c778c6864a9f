"""Mapping feature vectors to cnoidal wave parameters under evolvable genes.

Two schemes are supported:

* amplitude encoding: wave frequencies are fixed per feature (but are
  themselves genes); the feature value selects / scales the amplitude.
* frequency encoding: the mirror image, with amplitudes fixed and the
  feature value driving the frequency.

Discrete features use one wave per feature with one parameter gene per
possible value.  Continuous features are written in base-10 fixed point
and use one wave per digit, with one weight gene per digit scaling the
digit value into the physical range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .waves import CnoidalParams, DEFAULT_DISPERSION

AMPLITUDE = "amplitude"
FREQUENCY = "frequency"
SCHEMES = (AMPLITUDE, FREQUENCY)


@dataclass(frozen=True)
class DiscreteFeature:
    """Feature taking integer values 0 .. cardinality-1."""

    cardinality: int

    def __post_init__(self):
        if self.cardinality < 2:
            raise ValueError(f"discrete cardinality must be >= 2, got {self.cardinality}")

    # value genes (one per possible value) + one counterpart gene
    @property
    def num_genes(self) -> int:
        return self.cardinality + 1

    @property
    def num_waves(self) -> int:
        return 1


@dataclass(frozen=True)
class ContinuousFeature:
    """Real-valued feature on [lo, hi], encoded digit by digit."""

    digits: int
    lo: float
    hi: float

    def __post_init__(self):
        if self.digits < 1:
            raise ValueError(f"digit precision must be >= 1, got {self.digits}")
        if not self.lo < self.hi:
            raise ValueError(f"feature domain must satisfy lo < hi, got [{self.lo}, {self.hi}]")

    # one weight gene + one counterpart gene per digit
    @property
    def num_genes(self) -> int:
        return 2 * self.digits

    @property
    def num_waves(self) -> int:
        return self.digits


Feature = Union[DiscreteFeature, ContinuousFeature]


@dataclass(frozen=True)
class FeatureSpec:
    features: tuple[Feature, ...]

    def __init__(self, features: Sequence[Feature]):
        object.__setattr__(self, "features", tuple(features))

    @property
    def num_waves(self) -> int:
        return sum(f.num_waves for f in self.features)

    @property
    def num_encoding_genes(self) -> int:
        return sum(f.num_genes for f in self.features)


@dataclass(frozen=True)
class EncodingBounds:
    """Physical ranges the normalized genes are mapped into."""

    amp_range: tuple[float, float] = (0.0, 1.5)
    freq_range: tuple[float, float] = (0.1, 3.0)
    t_max: float = 30.0

    def __post_init__(self):
        lo, hi = self.amp_range
        if not (0 <= lo < hi):
            raise ValueError(f"bad amplitude range {self.amp_range}")
        lo, hi = self.freq_range
        if not (0 < lo < hi):
            raise ValueError(f"bad frequency range {self.freq_range}")
        if self.t_max <= 0:
            raise ValueError(f"t_max must be positive, got {self.t_max}")


@dataclass(eq=False)
class Genotype:
    """Normalized evolvable parameters: readout-time genes + encoding genes.

    All entries live in [0, 1]; denormalization into physical units
    happens at encode / readout time.
    """

    times: np.ndarray
    genes: np.ndarray
    scheme: str = AMPLITUDE

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.genes = np.asarray(self.genes, dtype=float)
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        for name, arr in (("times", self.times), ("genes", self.genes)):
            if arr.ndim != 1:
                raise ValueError(f"{name} must be a flat vector")
            if arr.size and (arr.min() < 0 or arr.max() > 1):
                raise ValueError(f"{name} genes must lie in [0, 1]")

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.times, self.genes])

    @classmethod
    def from_vector(cls, vec: np.ndarray, num_times: int, scheme: str) -> "Genotype":
        vec = np.asarray(vec, dtype=float)
        return cls(times=vec[:num_times], genes=vec[num_times:], scheme=scheme)

    @classmethod
    def random(cls, num_times: int, num_genes: int, scheme: str, rng: np.random.Generator) -> "Genotype":
        return cls(times=rng.random(num_times), genes=rng.random(num_genes), scheme=scheme)


class GeneCountError(ValueError):
    """Genotype gene count does not match the feature spec."""


def _denorm(gene: float, lo: float, hi: float) -> float:
    return lo + float(gene) * (hi - lo)


def digits(x: float, lo: float, hi: float, d: int) -> list[int]:
    """First d base-10 fixed-point digits of the min-max normalized value.

    Truncating, not rounding; x == hi saturates to all nines.
    """
    if not lo <= x <= hi:
        raise ValueError(f"value {x} outside domain [{lo}, {hi}]")
    n = (x - lo) / (hi - lo)
    scaled = min(math.floor(n * 10**d), 10**d - 1)
    out = []
    for _ in range(d):
        out.append(scaled % 10)
        scaled //= 10
    return out[::-1]


def readout_times(genotype: Genotype, bounds: EncodingBounds) -> np.ndarray:
    """Denormalized readout instants, sorted ascending."""
    return np.sort(genotype.times * bounds.t_max)


def encode(
    x: Sequence[float],
    genotype: Genotype,
    spec: FeatureSpec,
    bounds: EncodingBounds,
    u0: float = 1.0,
    dispersion: float = DEFAULT_DISPERSION,
) -> list[CnoidalParams]:
    """Cnoidal wave parameters encoding one observation.

    Wave order follows feature order (digit order within continuous
    features); wave velocities follow from the KdV dispersion relation
    via CnoidalParams.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (len(spec.features),):
        raise ValueError(
            f"observation has {x.size} entries, spec expects {len(spec.features)}"
        )
    if genotype.genes.size != spec.num_encoding_genes:
        raise GeneCountError(
            f"genotype carries {genotype.genes.size} encoding genes, "
            f"spec requires {spec.num_encoding_genes}"
        )
    amp_lo, amp_hi = bounds.amp_range
    freq_lo, freq_hi = bounds.freq_range
    amplitude_scheme = genotype.scheme == AMPLITUDE

    waves: list[CnoidalParams] = []
    pos = 0
    for feature, value in zip(spec.features, x):
        g = genotype.genes[pos : pos + feature.num_genes]
        pos += feature.num_genes
        if isinstance(feature, DiscreteFeature):
            m = int(value)
            if m != value or not 0 <= m < feature.cardinality:
                raise ValueError(
                    f"discrete value {value} outside 0..{feature.cardinality - 1}"
                )
            value_gene = g[m]
            counterpart_gene = g[feature.cardinality]
            if amplitude_scheme:
                eps = _denorm(value_gene, amp_lo, amp_hi)
                k = _denorm(counterpart_gene, freq_lo, freq_hi)
            else:
                k = _denorm(value_gene, freq_lo, freq_hi)
                eps = _denorm(counterpart_gene, amp_lo, amp_hi)
            waves.append(CnoidalParams(eps, k, u0=u0, dispersion=dispersion))
        else:
            digs = digits(float(value), feature.lo, feature.hi, feature.digits)
            weight_genes = g[: feature.digits]
            counterpart_genes = g[feature.digits :]
            for dig, wg, cg in zip(digs, weight_genes, counterpart_genes):
                if amplitude_scheme:
                    # weight bounded so weight * 9 stays inside the range
                    eps = min(max(float(wg) * (amp_hi / 9.0) * dig, amp_lo), amp_hi)
                    k = _denorm(cg, freq_lo, freq_hi)
                else:
                    k = min(max(float(wg) * (freq_hi / 9.0) * dig, freq_lo), freq_hi)
                    eps = _denorm(cg, amp_lo, amp_hi)
                waves.append(CnoidalParams(eps, k, u0=u0, dispersion=dispersion))
    return waves


def descriptor_values(waves: Sequence[CnoidalParams], scheme: str) -> np.ndarray:
    """Encoding parameters that characterize an evaluation: the amplitudes
    under the amplitude scheme, the frequencies under the frequency one."""
    if scheme == AMPLITUDE:
        return np.array([w.epsilon for w in waves])
    return np.array([w.k for w in waves])
