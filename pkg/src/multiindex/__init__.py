# Exact multi-index combinatorics for the graded monomial basis
from .indices import (
    DEFAULT_MAX_RANK,
    GradedBasisIndexer,
    MultiIndex,
    enumerate_slab,
    slab_size,
)
from .combinatorics import (
    chu_vandermonde_lhs,
    chu_vandermonde_rhs,
    falling_ratio_sum,
    multinomial,
    multinomial_norm_sq,
    rank_PN,
    sphere_moment_limit,
)

__all__ = [
    "DEFAULT_MAX_RANK",
    "GradedBasisIndexer",
    "MultiIndex",
    "enumerate_slab",
    "slab_size",
    "chu_vandermonde_lhs",
    "chu_vandermonde_rhs",
    "falling_ratio_sum",
    "multinomial",
    "multinomial_norm_sq",
    "rank_PN",
    "sphere_moment_limit",
]
