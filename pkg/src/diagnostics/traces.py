"""
Trace-per-unit-volume limits and the Szegő gap.

    χ_N(T) = Tr(P_N T P_N) / d_N  →  ∫ φ dσ
    (1/d_N) Σ f(λ_i)              →  ∫ f∘φ dσ
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import sqrt
from typing import Callable, Dict, Iterable, Optional, Tuple, Union

import numpy as np

from src.errors import ExpansionCapExceeded, PreconditionError
from src.multiindex import MultiIndex, rank_PN
from src.operators import (
    DEFAULT_MAX_DENSE_RANK,
    CompactPerturbation,
    HermitianSymbol,
    TruncatedOperator,
    WeightFamily,
    assemble_truncation,
    trace_enumerated,
    trace_exact,
)
from src.spectral import (
    EmpiricalSpectralDistribution,
    PolynomialFunction,
    TestFunction,
    chi_N,
    empirical_distribution,
    esd_mean_of,
)
from src.measure import (
    DEFAULT_EXPANSION_CAP,
    ShardMap,
    exact_polynomial_integral,
    integrate_pushforward,
    monomial_moment,
)
from src.diagnostics.tables import ConvergenceRow, ConvergenceTable

logger = logging.getLogger(__name__)


def _check_schedule(cutoffs) -> list:
    cutoffs = list(cutoffs)
    if not cutoffs:
        raise PreconditionError("cutoff schedule is empty")
    if any(b <= a for a, b in zip(cutoffs, cutoffs[1:])):
        raise PreconditionError(f"cutoff schedule must increase strictly: {cutoffs}")
    return cutoffs


def chi_exact(alpha: MultiIndex, weights: WeightFamily, cutoff: int) -> Fraction:
    """χ_N(S^{α*}S^α) as a rational."""
    trace = trace_exact(alpha, weights, cutoff) if weights.is_drury_arveson \
        else trace_enumerated(alpha, weights, cutoff)
    return trace / rank_PN(weights.dimension, cutoff)


def chi_limit_table(alpha: MultiIndex, weights: WeightFamily, cutoffs: Iterable[int]) -> ConvergenceTable:
    """χ_N(S^{α*}S^α) against its limit, the sphere moment ∫|z^α|² dσ."""
    cutoffs = _check_schedule(cutoffs)
    limit = monomial_moment(alpha, alpha)
    table = ConvergenceTable(
        experiment="chi_limit",
        metadata={"space": weights.label, "dimension": weights.dimension, "alpha": alpha.to_list()},
    )
    for n in cutoffs:
        table.add_row(ConvergenceRow(n, rank_PN(weights.dimension, n), chi_exact(alpha, weights, n), limit))
    return table


def compact_decay_table(
    perturbation: CompactPerturbation, dimension: int, cutoffs: Iterable[int]
) -> ConvergenceTable:
    """χ_N(K) with the bound ‖K‖₁ / √d_N alongside."""
    cutoffs = _check_schedule(cutoffs)
    trace_norm = perturbation.trace_norm()
    table = ConvergenceTable(
        experiment="compact_decay",
        metadata={"dimension": dimension, "support": perturbation.support_size, "trace_norm": trace_norm},
    )
    for n in cutoffs:
        rank = rank_PN(dimension, n)
        diagonal = sum(
            (Fraction(v.real) for (r, c), v in perturbation.entries.items() if r == c and r < rank),
            Fraction(0),
        )
        table.add_row(ConvergenceRow(n, rank, diagonal / rank, 0, trace_norm / sqrt(rank)))
    return table


def compact_decay_holds(table: ConvergenceTable, slack: float = 1e-12) -> bool:
    return all(abs(float(r.lhs)) <= float(r.bound) + slack for r in table.rows)


def state_normalized(weights: WeightFamily, cutoff: int) -> bool:
    """χ_N(I) = 1 on the assembled identity."""
    identity = HermitianSymbol.constant(weights.dimension, 1.0)
    return chi_N(assemble_truncation(identity, weights, cutoff)) == 1.0


def state_bound_holds(operator: TruncatedOperator, esd: Optional[EmpiricalSpectralDistribution] = None,
                      slack: float = 1e-10) -> bool:
    """|χ_N(T)| ≤ max |λ(T)|."""
    esd = esd or empirical_distribution(operator)
    return abs(chi_N(operator)) <= float(np.max(np.abs(esd.eigenvalues))) + slack


@dataclass(frozen=True)
class IntegrationSpec:
    """How to compute ∫ f∘φ dσ."""
    samples: int = 100_000
    seed: int = 0
    prefer_exact: bool = True
    expansion_cap: int = DEFAULT_EXPANSION_CAP
    map_shards: Optional[ShardMap] = field(default=None, compare=False)


@dataclass(frozen=True)
class PushforwardReference:
    value: float
    stderr: float
    exact: bool


@dataclass(frozen=True)
class SzegoGap:
    cutoff: int
    rank: int
    lhs: float
    rhs: float
    rhs_stderr: float
    exact: bool

    @property
    def gap(self) -> float:
        return abs(self.lhs - self.rhs)

    def to_dict(self) -> Dict:
        return {
            "N": self.cutoff,
            "d_N": self.rank,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.gap,
            "rhs_stderr": self.rhs_stderr,
            "exact": self.exact,
        }


def pushforward_reference(
    symbol: HermitianSymbol, f: Union[TestFunction, Callable], spec: IntegrationSpec = IntegrationSpec()
) -> PushforwardReference:
    """
    ∫ f∘φ dσ, exactly when f and φ are polynomials and the expansion fits
    under the cap, otherwise by Monte Carlo.
    """
    if spec.prefer_exact and isinstance(f, PolynomialFunction):
        try:
            value = exact_polynomial_integral(symbol, f, spec.expansion_cap)
            return PushforwardReference(float(value), 0.0, True)
        except ExpansionCapExceeded as e:
            logger.warning(f"[Measure] {e}; falling back to {spec.samples} samples")
    value, stderr = integrate_pushforward(symbol, f, spec.samples, spec.seed, spec.map_shards)
    return PushforwardReference(value, stderr, False)


def szego_gap(
    symbol: HermitianSymbol,
    weights: WeightFamily,
    f: Union[TestFunction, Callable],
    cutoff: int,
    spec: IntegrationSpec = IntegrationSpec(),
    perturbation: Optional[CompactPerturbation] = None,
    reference: Optional[PushforwardReference] = None,
    max_rank: int = DEFAULT_MAX_DENSE_RANK,
) -> Tuple[SzegoGap, EmpiricalSpectralDistribution]:
    """
    Both sides of the Szegő limit at one cutoff.

    Args:
        reference: precomputed right-hand side, shared across a sweep
    Returns:
        (gap record, the ESD it was computed from)
    """
    operator = assemble_truncation(symbol, weights, cutoff, perturbation, max_rank)
    reference = reference or pushforward_reference(symbol, f, spec)
    return operator_szego_gap(operator, f, reference)


def operator_szego_gap(
    operator: TruncatedOperator, f: Union[TestFunction, Callable], reference: PushforwardReference
) -> Tuple[SzegoGap, EmpiricalSpectralDistribution]:
    """The Szegő gap of an already assembled truncation."""
    esd = empirical_distribution(operator)
    lhs = esd_mean_of(f, esd)
    gap = SzegoGap(operator.cutoff, operator.rank, lhs, reference.value, reference.stderr, reference.exact)
    logger.debug(f"[Szego] N={gap.cutoff}: lhs={lhs:.10g} rhs={gap.rhs:.10g} gap={gap.gap:.3g}")
    return gap, esd
