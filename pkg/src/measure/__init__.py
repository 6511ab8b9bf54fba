# Normalized surface measure on the sphere and push-forwards under symbols
from .sphere import DEFAULT_SHARD_SIZE, SphereMeasure, monomial_moment, sample_sphere
from .pushforward import (
    DEFAULT_EXPANSION_CAP,
    ShardMap,
    exact_polynomial_integral,
    exact_polynomial_pushforward,
    integrate_pushforward,
    shard_values,
)

__all__ = [
    "DEFAULT_SHARD_SIZE",
    "SphereMeasure",
    "monomial_moment",
    "sample_sphere",
    "DEFAULT_EXPANSION_CAP",
    "ShardMap",
    "exact_polynomial_integral",
    "exact_polynomial_pushforward",
    "integrate_pushforward",
    "shard_values",
]
