"""
The sphere side of the Szegő limit: ∫ f∘φ dσ.

Polynomial f is integrated exactly by expanding φ^k into monomial pairs
and summing exact moments; anything else goes through Monte Carlo.
"""
import logging
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from src.errors import ExpansionCapExceeded, PreconditionError
from src.multiindex import MultiIndex
from src.operators import HermitianSymbol, symbol_values
from src.spectral import PolynomialFunction, TestFunction, apply_test_function
from src.measure.sphere import SphereMeasure, monomial_moment

logger = logging.getLogger(__name__)

# map(fn, items) -> results in item order
ShardMap = Callable[[Callable, List], List]

DEFAULT_EXPANSION_CAP = 1_000_000

# exact complex coefficient as (real, imaginary) rationals
GaussianRational = Tuple[Fraction, Fraction]


def _serial_map(fn: Callable, items: List) -> List:
    return [fn(item) for item in items]


def shard_values(item) -> np.ndarray:
    """f∘φ on one shard of the sphere sample; item = (symbol, f, seed, shard, size)."""
    symbol, f, seed, k, size = item
    points = SphereMeasure(symbol.dimension, seed).shard(k, size)
    return apply_test_function(f, symbol_values(symbol, points))


def integrate_pushforward(
    symbol: HermitianSymbol,
    f: Union[TestFunction, Callable],
    n: int,
    seed: int = 0,
    map_shards: Optional[ShardMap] = None,
) -> Tuple[float, float]:
    """
    Monte Carlo estimate of ∫ f(φ(z)) dσ(z).

    Shards are evaluated through `map_shards` (serially by default); the
    estimate does not depend on how they are distributed.

    Returns:
        (estimate, standard error) with stderr = sample std / √n
    """
    if n < 1:
        raise PreconditionError(f"need at least one sample, got {n}")
    items = [(symbol, f, seed, k, size) for k, size in SphereMeasure(symbol.dimension, seed).shard_plan(n)]
    values = np.concatenate((map_shards or _serial_map)(shard_values, items))
    estimate = float(np.mean(values))
    stderr = float(np.std(values, ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    logger.debug(f"[Measure] MC {getattr(f, 'name', f)}∘{symbol.identifier}: {estimate:.6g} ± {stderr:.2g}")
    return estimate, stderr


def _exact_terms(symbol: HermitianSymbol) -> Dict[Tuple[MultiIndex, MultiIndex], GaussianRational]:
    return {
        key: (Fraction(complex(c).real), Fraction(complex(c).imag))
        for key, c in symbol.terms.items()
    }


def _imbalance(alpha: MultiIndex, beta: MultiIndex) -> int:
    return sum(abs(x) for x in alpha.difference(beta))


def exact_polynomial_pushforward(
    symbol: HermitianSymbol, power: int, cap: int = DEFAULT_EXPANSION_CAP
) -> Fraction:
    """
    ∫ φ^k dσ in exact arithmetic.

    Float coefficients enter through Fraction(float), which is exact. Partial
    products whose α−β imbalance can no longer be cancelled by the remaining
    factors are dropped, since only diagonal pairs have nonzero moments.
    """
    if power < 0:
        raise PreconditionError(f"power must be >= 0, got {power}")
    zero = MultiIndex.zero(symbol.dimension)
    terms = _exact_terms(symbol)
    max_shift = max((_imbalance(a, b) for a, b in terms), default=0)

    current: Dict[Tuple[MultiIndex, MultiIndex], GaussianRational] = {(zero, zero): (Fraction(1), Fraction(0))}
    for step in range(power):
        remaining = power - step - 1
        expanded: Dict[Tuple[MultiIndex, MultiIndex], GaussianRational] = {}
        for (a, b), (cr, ci) in current.items():
            for (ta, tb), (tr, ti) in terms.items():
                na, nb = a + ta, b + tb
                if _imbalance(na, nb) > remaining * max_shift:
                    continue
                pr, pi = expanded.get((na, nb), (Fraction(0), Fraction(0)))
                expanded[(na, nb)] = (pr + cr * tr - ci * ti, pi + cr * ti + ci * tr)
        if len(expanded) > cap:
            raise ExpansionCapExceeded(len(expanded), cap)
        current = expanded

    real, imag = Fraction(0), Fraction(0)
    for (a, b), (cr, ci) in current.items():
        if a == b:
            moment = monomial_moment(a, b)
            real += cr * moment
            imag += ci * moment
    if imag != 0:
        logger.debug(f"[Measure] Dropping imaginary residue {float(imag):.3g} of ∫φ^{power}")
    return real


def exact_polynomial_integral(
    symbol: HermitianSymbol, f: PolynomialFunction, cap: int = DEFAULT_EXPANSION_CAP
) -> Fraction:
    """∫ f∘φ dσ for polynomial f = Σ a_k x^k, exactly."""
    return sum(
        (Fraction(c) * exact_polynomial_pushforward(symbol, k, cap)
         for k, c in enumerate(f.coefficients) if c != 0),
        Fraction(0),
    )
