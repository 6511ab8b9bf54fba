"""
Følner ratios of the projections P_N.

    commutator:  ‖P_N T − T P_N‖ / ‖P_N‖
    corner:      ‖(I − P_N) T P_N‖ / ‖P_N‖

in the Hilbert-Schmidt norm (default) or the trace norm. Both vanish in
the limit for every Toeplitz-like T.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb, sqrt
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

import numpy as np

from src.errors import ConfigError
from src.multiindex import rank_PN
from src.operators import (
    DEFAULT_MAX_DENSE_RANK,
    HermitianSymbol,
    WeightFamily,
    assemble_matrix,
    commutator_norm_sq_assembled,
    commutator_norm_sq_exact,
    terms_max_degree,
)
from src.diagnostics.tables import ConvergenceRow, ConvergenceTable

logger = logging.getLogger(__name__)

NORMS = ("hs", "trace")


def _terms(op: Union[HermitianSymbol, Mapping]) -> Mapping:
    return op.terms if isinstance(op, HermitianSymbol) else op


def single_shift(terms: Mapping) -> Optional[Tuple[int, bool]]:
    """(i, adjoint) if the terms are exactly S_i or S_i*, else None."""
    if len(terms) != 1:
        return None
    (alpha, beta), c = next(iter(terms.items()))
    if c != 1:
        return None
    if beta.degree == 0 and alpha.degree == 1:
        return alpha.exponents.index(1), False
    if alpha.degree == 0 and beta.degree == 1:
        return beta.exponents.index(1), True
    return None


def folner_bound_sq(dimension: int, cutoff: int) -> Fraction:
    """C(N+d−1, d−1) / d_N, the bound on the squared shift ratio."""
    return Fraction(comb(cutoff + dimension - 1, dimension - 1), rank_PN(dimension, cutoff))


def shift_ratio_sq_exact(weights: WeightFamily, i: int, cutoff: int) -> Fraction:
    """‖S_i P_N − P_N S_i‖₂² / ‖P_N‖₂², exactly."""
    return commutator_norm_sq_exact(weights, i, cutoff) / rank_PN(weights.dimension, cutoff)


def _norm(block: np.ndarray, norm: str) -> float:
    if block.size == 0:
        return 0.0
    if norm == "hs":
        return float(np.linalg.norm(block, "fro"))
    return float(np.linalg.svd(block, compute_uv=False).sum())


def ratios_from_matrix(matrix: np.ndarray, rank: int, norm: str = "hs") -> Tuple[float, float]:
    """
    (commutator ratio, corner ratio) from a compression at a cutoff above N.

    P_N T − T P_N = P_N T (I−P_N) − (I−P_N) T P_N has two disjoint blocks,
    so its norm combines the norms of the two off-diagonal corners.
    """
    if norm not in NORMS:
        raise ConfigError(f"unknown norm {norm!r}; expected one of {NORMS}")
    lower = matrix[rank:, :rank]
    upper = matrix[:rank, rank:]
    low, up = _norm(lower, norm), _norm(upper, norm)
    if norm == "hs":
        volume = sqrt(rank)
        return sqrt(low ** 2 + up ** 2) / volume, low / volume
    return (low + up) / rank, low / rank


def _assembled_ratios(terms: Mapping, weights: WeightFamily, cutoff: int, norm: str,
                      max_rank: int) -> Tuple[float, float]:
    big = assemble_matrix(terms, weights, cutoff + terms_max_degree(terms), max_rank)
    return ratios_from_matrix(big, rank_PN(weights.dimension, cutoff), norm)


def folner_ratio_commutator(
    op: Union[HermitianSymbol, Mapping],
    weights: WeightFamily,
    cutoff: int,
    norm: str = "hs",
    max_rank: int = DEFAULT_MAX_DENSE_RANK,
) -> float:
    """τ_N(T) = ‖P_N T − T P_N‖ / ‖P_N‖."""
    terms = _terms(op)
    shift = single_shift(terms)
    if shift is not None and norm == "hs":
        return sqrt(shift_ratio_sq_exact(weights, shift[0], cutoff))
    return _assembled_ratios(terms, weights, cutoff, norm, max_rank)[0]


def folner_ratio_corner(
    op: Union[HermitianSymbol, Mapping],
    weights: WeightFamily,
    cutoff: int,
    norm: str = "hs",
    max_rank: int = DEFAULT_MAX_DENSE_RANK,
) -> float:
    """‖(I − P_N) T P_N‖ / ‖P_N‖."""
    terms = _terms(op)
    shift = single_shift(terms)
    if shift is not None and norm == "hs":
        i, adjoint = shift
        # S_i* lowers degree, so its lower corner vanishes
        return 0.0 if adjoint else sqrt(shift_ratio_sq_exact(weights, i, cutoff))
    return _assembled_ratios(terms, weights, cutoff, norm, max_rank)[1]


def folner_table(
    op: Union[HermitianSymbol, Mapping],
    weights: WeightFamily,
    cutoffs: Iterable[int],
    label: str = "operator",
    norm: str = "hs",
    max_rank: int = DEFAULT_MAX_DENSE_RANK,
) -> ConvergenceTable:
    """
    τ_N over a cutoff schedule; lhs is the ratio, rhs its limit 0.

    For a single shift the lhs is read off the assembled rectangular shift
    and the exact rational value is kept alongside as `closed_form`.
    """
    terms = _terms(op)
    shift = single_shift(terms)
    table = ConvergenceTable(
        experiment=f"folner_{label}",
        metadata={"space": weights.label, "dimension": weights.dimension, "norm": norm, "operator": label},
    )
    for n in cutoffs:
        rank = rank_PN(weights.dimension, n)
        aux: Dict[str, float] = {}
        bound = None
        if shift is not None and norm == "hs":
            i, adjoint = shift
            lhs = sqrt(commutator_norm_sq_assembled(weights, i, n) / rank)
            aux["closed_form"] = sqrt(shift_ratio_sq_exact(weights, i, n))
            aux["corner"] = 0.0 if adjoint else lhs
            if weights.is_drury_arveson:
                bound = sqrt(folner_bound_sq(weights.dimension, n))
        else:
            lhs, corner = _assembled_ratios(terms, weights, n, norm, max_rank)
            aux["corner"] = corner
        table.add_row(ConvergenceRow(n, rank, lhs, 0.0, bound, aux))
        logger.debug(f"[Folner] {label} N={n}: τ_N={lhs:.6g}")
    return table


@dataclass
class SubadditivityReport:
    """τ_N of A, B, A+B and AB with compressed operator norms (lower bounds of ‖·‖)."""
    cutoff: int
    tau_a: float
    tau_b: float
    tau_sum: float
    tau_product: float
    norm_a: float
    norm_b: float
    slack: float = 1e-8

    @property
    def sum_holds(self) -> bool:
        return self.tau_sum <= self.tau_a + self.tau_b + self.slack

    @property
    def product_holds(self) -> bool:
        return self.tau_product <= self.tau_a * self.norm_b + self.tau_b * self.norm_a + self.slack

    def to_dict(self) -> Dict:
        return {
            "N": self.cutoff,
            "tau_a": self.tau_a,
            "tau_b": self.tau_b,
            "tau_sum": self.tau_sum,
            "tau_product": self.tau_product,
            "norm_a_lower_bound": self.norm_a,
            "norm_b_lower_bound": self.norm_b,
            "sum_holds": self.sum_holds,
            "product_holds": self.product_holds,
        }


def subadditivity_check(
    a: Union[HermitianSymbol, Mapping],
    b: Union[HermitianSymbol, Mapping],
    weights: WeightFamily,
    cutoff: int,
    max_rank: int = DEFAULT_MAX_DENSE_RANK,
) -> SubadditivityReport:
    """
    Check τ_N(A+B) ≤ τ_N(A) + τ_N(B) and τ_N(AB) ≤ τ_N(A)‖B‖ + τ_N(B)‖A‖.

    Norms are those of the compressions to degree ≤ N + D_A + D_B. They bound
    ‖P_{N+D_A} B‖ and ‖A P_{N+D_B}‖ from above, which is all the product
    estimate uses, so both inequalities must hold exactly for these values.
    """
    ta, tb = _terms(a), _terms(b)
    da, db = terms_max_degree(ta), terms_max_degree(tb)
    rank = rank_PN(weights.dimension, cutoff)

    tau_a = _assembled_ratios(ta, weights, cutoff, "hs", max_rank)[0]
    tau_b = _assembled_ratios(tb, weights, cutoff, "hs", max_rank)[0]

    summed: Dict = dict(ta)
    for key, c in tb.items():
        summed[key] = summed.get(key, 0j) + c
    tau_sum = _assembled_ratios(summed, weights, cutoff, "hs", max_rank)[0]

    # exact entries of AB up to degree N + D_A + D_B need B's columns up to one more D_B
    reach = cutoff + da + db
    big_a = assemble_matrix(ta, weights, reach + db, max_rank)
    big_b = assemble_matrix(tb, weights, reach + db, max_rank)
    size = rank_PN(weights.dimension, reach)
    product = (big_a @ big_b)[:size, :size]
    tau_product = ratios_from_matrix(product, rank, "hs")[0]

    norm_a = float(np.linalg.norm(big_a[:size, :size], 2))
    norm_b = float(np.linalg.norm(big_b[:size, :size], 2))
    return SubadditivityReport(cutoff, tau_a, tau_b, tau_sum, tau_product, norm_a, norm_b)
