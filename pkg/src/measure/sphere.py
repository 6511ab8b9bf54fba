"""
Normalized surface measure σ on the unit sphere ∂B_d ⊂ ℂ^d.

Points are drawn as complex Gaussian vectors scaled to unit norm, which
is exactly uniform. The stream is split into fixed-size shards, shard k
drawing from Philox(key=seed) jumped k times, so a sample of size n is
the same whatever the number of workers that produce it.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Tuple

import numpy as np

from src.errors import ConfigError, DimensionMismatch
from src.multiindex import MultiIndex, sphere_moment_limit

logger = logging.getLogger(__name__)

DEFAULT_SHARD_SIZE = 1 << 16


@lru_cache(maxsize=4096)
def _diagonal_moment(alpha: MultiIndex) -> Fraction:
    return sphere_moment_limit(alpha)


def monomial_moment(alpha: MultiIndex, beta: MultiIndex) -> Fraction:
    """∫ z̄^β z^α dσ = δ_{αβ} (d−1)! α!/(d−1+|α|)!."""
    if alpha.dimension != beta.dimension:
        raise DimensionMismatch(f"{alpha} and {beta} live in different dimensions")
    if alpha != beta:
        return Fraction(0)
    return _diagonal_moment(alpha)


def _shard_points(dimension: int, seed: int, shard: int, size: int) -> np.ndarray:
    generator = np.random.Generator(np.random.Philox(key=seed).jumped(shard))
    gaussian = generator.standard_normal((size, dimension, 2))
    z = gaussian[..., 0] + 1j * gaussian[..., 1]
    return z / np.linalg.norm(z, axis=1, keepdims=True)


@dataclass
class SphereMeasure:
    """
    Seeded sampler for σ.

    Args:
        dimension: ball dimension d
        seed: 64-bit seed of the Philox stream
        shard_size: points per shard (fixes the stream layout)
        cache: keep the last requested sample in memory
    """
    dimension: int
    seed: int = 0
    shard_size: int = DEFAULT_SHARD_SIZE
    cache: bool = False
    _cached: Dict[int, np.ndarray] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.dimension < 1:
            raise ConfigError(f"dimension must be >= 1, got {self.dimension}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    def shard(self, k: int, size: int) -> np.ndarray:
        """First `size` points of shard k."""
        return _shard_points(self.dimension, self.seed, k, size)

    def shard_plan(self, n: int) -> List[Tuple[int, int]]:
        """(shard index, size) pairs covering the first n points."""
        full, rest = divmod(n, self.shard_size)
        return [(k, self.shard_size) for k in range(full)] + ([(full, rest)] if rest else [])

    def iter_shards(self, n: int) -> Iterator[np.ndarray]:
        for k, size in self.shard_plan(n):
            yield self.shard(k, size)

    def sample(self, n: int) -> np.ndarray:
        if n < 1:
            raise ConfigError(f"need at least one sample, got {n}")
        if self.cache and n in self._cached:
            return self._cached[n]
        points = np.concatenate(list(self.iter_shards(n)), axis=0)
        if self.cache:
            self._cached.clear()
            self._cached[n] = points
        return points


def sample_sphere(measure: SphereMeasure, n: int) -> np.ndarray:
    """n i.i.d. uniform points on ∂B_d, shape (n, d)."""
    return measure.sample(n)
