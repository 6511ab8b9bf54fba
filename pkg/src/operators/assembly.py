"""
Exact finite sections P_N T P_N of Toeplitz-like operators.

For a word S^{β*} S^α the compression is assembled as

    P_N S^{β*} S^α P_N = R_β^H R_α,

where R_γ is the rectangular matrix of S^γ from the degree-≤N basis into
the degree-≤(N+D) basis. Multiplying two square truncated shifts would
insert a projection between S^{β*} and S^α and give wrong entries.
"""
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, Optional

import numpy as np
import scipy.sparse as sp

from src.errors import (
    DimensionMismatch,
    PreconditionError,
    RankCapExceeded,
    SzegoError,
    UnsupportedWeightFamily,
)
from src.multiindex import GradedBasisIndexer, MultiIndex, enumerate_slab, falling_ratio_sum, rank_PN
from src.operators.symbols import (
    CompactPerturbation,
    HermitianSymbol,
    terms_max_degree,
)
from src.operators.weights import WeightFamily

logger = logging.getLogger(__name__)

DEFAULT_MAX_DENSE_RANK = 5000


def shift_matrix(
    weights: WeightFamily,
    gamma: MultiIndex,
    source: GradedBasisIndexer,
    target: GradedBasisIndexer,
) -> sp.csc_matrix:
    """Matrix of S^γ from span{e_w : |w| ≤ N} into span{e_v : |v| ≤ N'}; one nonzero per column."""
    if target.cutoff < source.cutoff + gamma.degree:
        raise PreconditionError(
            f"target cutoff {target.cutoff} cannot hold S^{gamma.exponents} of degree-{source.cutoff} vectors"
        )
    rows = np.empty(source.total_rank, dtype=np.int64)
    values = np.empty(source.total_rank, dtype=float)
    positions = target.positions
    for k, w in enumerate(source.basis):
        rows[k] = positions[w + gamma]
        values[k] = np.sqrt(float(weights.word_weight_sq(gamma, w)))
    cols = np.arange(source.total_rank)
    return sp.csc_matrix(
        (values, (rows, cols)), shape=(target.total_rank, source.total_rank)
    )


def _check_rank(dimension: int, cutoff: int, max_rank: int) -> int:
    rank = rank_PN(dimension, cutoff)
    if rank > max_rank:
        raise RankCapExceeded(rank, max_rank)
    return rank


def _shift_factors(terms, weights: WeightFamily, cutoff: int, max_rank: int):
    source = GradedBasisIndexer(weights.dimension, cutoff, max_rank)
    target = GradedBasisIndexer(weights.dimension, cutoff + terms_max_degree(terms), sys.maxsize)
    words = {alpha for alpha, _ in terms} | {beta for _, beta in terms}
    factors = {gamma: shift_matrix(weights, gamma, source, target) for gamma in words}
    return source, factors


def assemble_matrix(
    terms: Mapping,
    weights: WeightFamily,
    cutoff: int,
    max_rank: int = DEFAULT_MAX_DENSE_RANK,
) -> np.ndarray:
    """
    Dense compression of an arbitrary finite word sum Σ c S^{β*} S^α.

    No symmetry is assumed, so this also covers single shifts and their adjoints.
    """
    for alpha, beta in terms:
        if alpha.dimension != weights.dimension or beta.dimension != weights.dimension:
            raise DimensionMismatch(
                f"word ({alpha}, {beta}) does not match weight dimension {weights.dimension}"
            )
    _check_rank(weights.dimension, cutoff, max_rank)
    source, factors = _shift_factors(terms, weights, cutoff, max_rank)
    matrix = np.zeros((source.total_rank, source.total_rank), dtype=complex)
    for (alpha, beta), c in terms.items():
        matrix += c * (factors[beta].conj().T @ factors[alpha]).toarray()
    return matrix


def _is_canonical(alpha: MultiIndex, beta: MultiIndex) -> bool:
    return (alpha.sort_key, beta.sort_key) <= (beta.sort_key, alpha.sort_key)


@dataclass(frozen=True, eq=False)
class TruncatedOperator:
    """P_N T P_N in the weighted-monomial basis, with its provenance."""
    indexer: GradedBasisIndexer
    matrix: np.ndarray
    weights: WeightFamily
    symbol: Optional[HermitianSymbol] = None
    perturbation: Optional[CompactPerturbation] = None

    @property
    def cutoff(self) -> int:
        return self.indexer.cutoff

    @property
    def rank(self) -> int:
        return self.indexer.total_rank

    @property
    def dimension(self) -> int:
        return self.indexer.dimension

    @property
    def symbol_id(self) -> str:
        return self.symbol.identifier if self.symbol is not None else "perturbation"

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def block(self, cutoff: int) -> np.ndarray:
        """Top-left block belonging to a smaller cutoff."""
        size = rank_PN(self.dimension, cutoff)
        return self.matrix[:size, :size]

    def is_hermitian(self) -> bool:
        return bool(np.array_equal(self.matrix, self.matrix.conj().T))

    def describe(self) -> Dict:
        return {
            "dimension": self.dimension,
            "cutoff": self.cutoff,
            "rank": self.rank,
            "space": self.weights.label,
            "symbol": self.symbol_id,
            "perturbed": self.perturbation is not None,
        }


def assemble_truncation(
    symbol: HermitianSymbol,
    weights: WeightFamily,
    cutoff: int,
    perturbation: Optional[CompactPerturbation] = None,
    max_rank: int = DEFAULT_MAX_DENSE_RANK,
) -> TruncatedOperator:
    """
    Assemble P_N (Σ c_{αβ} S^{β*} S^α + K) P_N.

    Each conjugate pair of words is added as X + X^H, so the result equals
    its conjugate transpose bit for bit.
    """
    if symbol.dimension != weights.dimension:
        raise DimensionMismatch(
            f"symbol dimension {symbol.dimension} != weight dimension {weights.dimension}"
        )
    _check_rank(weights.dimension, cutoff, max_rank)
    source, factors = _shift_factors(symbol.terms, weights, cutoff, max_rank)
    matrix = np.zeros((source.total_rank, source.total_rank), dtype=complex)
    for (alpha, beta), c in symbol.terms.items():
        if not _is_canonical(alpha, beta):
            continue
        product = (factors[beta].conj().T @ factors[alpha]).toarray()
        if alpha == beta:
            matrix += c.real * product
        else:
            part = c * product
            matrix += part + part.conj().T
    if perturbation is not None:
        matrix += perturbation.compressed(source.total_rank)
    logger.debug(
        f"[Assembly] {symbol.identifier} on {weights.label}: N={cutoff}, d_N={source.total_rank}"
    )
    return TruncatedOperator(source, matrix, weights, symbol, perturbation)


def assemble_perturbation(
    perturbation: CompactPerturbation, weights: WeightFamily, cutoff: int,
    max_rank: int = DEFAULT_MAX_DENSE_RANK,
) -> TruncatedOperator:
    """P_N K P_N for a perturbation on its own."""
    indexer = GradedBasisIndexer(weights.dimension, cutoff, max_rank)
    return TruncatedOperator(
        indexer, perturbation.compressed(indexer.total_rank), weights, None, perturbation
    )


def trace_enumerated(alpha: MultiIndex, weights: WeightFamily, cutoff: int) -> Fraction:
    """Tr(P_N S^{α*} S^α P_N) = Σ_{|w|≤N} ‖S^α e_w‖², summed exactly."""
    return sum(
        (weights.word_weight_sq(alpha, w)
         for j in range(cutoff + 1)
         for w in enumerate_slab(weights.dimension, j)),
        Fraction(0),
    )


def trace_exact(alpha: MultiIndex, weights: WeightFamily, cutoff: int) -> Fraction:
    """
    Exact trace of the single-word compression on the Drury-Arveson space.

    Computed both from the closed form and by enumeration; the two must agree.
    """
    if not weights.is_drury_arveson:
        raise UnsupportedWeightFamily(
            f"closed-form trace exists only for the Drury-Arveson space, not {weights.label}"
        )
    closed = falling_ratio_sum(alpha, cutoff)
    enumerated = trace_enumerated(alpha, weights, cutoff)
    if closed != enumerated:
        raise SzegoError(
            f"trace identity failed for {alpha}, N={cutoff}: {closed} != {enumerated}"
        )
    return closed


def mixed_word_trace_is_zero(
    alpha: MultiIndex,
    beta: MultiIndex,
    cutoff: int,
    weights: Optional[WeightFamily] = None,
) -> bool:
    """Check Tr(P_N (S^{α*}S^β + S^{β*}S^α) P_N) = 0 on the assembled compression."""
    if alpha == beta:
        raise PreconditionError(f"words must differ, got {alpha} twice")
    weights = weights or WeightFamily.drury_arveson(alpha.dimension)
    symbol = HermitianSymbol.from_terms(
        alpha.dimension, [(alpha, beta, 1.0), (beta, alpha, 1.0)], complete=False
    )
    operator = assemble_truncation(symbol, weights, cutoff)
    return bool(np.trace(operator.matrix) == 0)


def commutator_norm_sq_exact(weights: WeightFamily, i: int, cutoff: int) -> Fraction:
    """‖S_i P_N − P_N S_i‖₂² = Σ_{|α|=N} ‖S_i e_α‖², exactly."""
    return sum(
        (weights.step_weight_sq(alpha, i) for alpha in enumerate_slab(weights.dimension, cutoff)),
        Fraction(0),
    )


def commutator_norm_sq_assembled(weights: WeightFamily, i: int, cutoff: int) -> float:
    """The same quantity read off the assembled rectangular shift (P_{N+1} − P_N) S_i P_N."""
    source = GradedBasisIndexer(weights.dimension, cutoff, sys.maxsize)
    target = GradedBasisIndexer(weights.dimension, cutoff + 1, sys.maxsize)
    shift = shift_matrix(weights, MultiIndex.unit(weights.dimension, i), source, target)
    corner = shift[source.total_rank:, :]
    return float(np.sum(np.abs(corner.toarray()) ** 2))
