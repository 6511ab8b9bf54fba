"""
Exact combinatorics on multi-indices.

All values are Python integers or `fractions.Fraction`; nothing here
touches floating point.
"""
from fractions import Fraction
from math import comb, factorial, prod

from src.errors import PreconditionError
from src.multiindex.indices import MultiIndex, enumerate_slab, slab_size


def multinomial(alpha: MultiIndex) -> int:
    """|α|! / α!."""
    return factorial(alpha.degree) // alpha.factorial


def multinomial_norm_sq(alpha: MultiIndex) -> Fraction:
    """‖z^α‖² = α!/|α|! in the Drury-Arveson norm."""
    return Fraction(alpha.factorial, factorial(alpha.degree))


def rank_PN(dimension: int, cutoff: int) -> int:
    """d_N = Σ_{j=0}^{N} C(j+d−1, d−1)."""
    if dimension < 1 or cutoff < 0:
        raise PreconditionError(f"need d >= 1 and N >= 0, got d={dimension}, N={cutoff}")
    return sum(slab_size(dimension, j) for j in range(cutoff + 1))


def _as_index(k) -> MultiIndex:
    return k if isinstance(k, MultiIndex) else MultiIndex(tuple(k))


def chu_vandermonde_lhs(k, j: int) -> int:
    """Σ_{|w|=j} Π_i C(w_i + k_i, w_i), by enumerating the slab."""
    k = _as_index(k)
    if j < 0:
        raise PreconditionError(f"degree must be >= 0, got {j}")
    return sum(
        prod(comb(w_i + k_i, w_i) for w_i, k_i in zip(w, k))
        for w in enumerate_slab(k.dimension, j)
    )


def chu_vandermonde_rhs(k, j: int) -> int:
    """C(k_1 + ··· + k_d + j + d − 1, j)."""
    k = _as_index(k)
    if j < 0:
        raise PreconditionError(f"degree must be >= 0, got {j}")
    return comb(k.degree + j + k.dimension - 1, j)


def sphere_moment_limit(alpha: MultiIndex) -> Fraction:
    """(d−1)! α! / (d−1+|α|)!."""
    d = alpha.dimension
    return Fraction(factorial(d - 1) * alpha.factorial, factorial(d - 1 + alpha.degree))


def falling_ratio_sum(alpha: MultiIndex, cutoff: int) -> Fraction:
    """
    Closed form of Σ_{|w|≤N} ‖S^α e_w‖² on the Drury-Arveson space:

        α!/(|α|+d−1)! · Σ_{j=0}^{N} (|α|+j+d−1)!/(|α|+j)!
    """
    d, a = alpha.dimension, alpha.degree
    inner = sum(factorial(a + j + d - 1) // factorial(a + j) for j in range(cutoff + 1))
    return Fraction(alpha.factorial * inner, factorial(a + d - 1))
