"""
The four experiment suites behind the `szego` subcommands.

Each runner sweeps the configured cutoffs on the worker pool, writes its
tables and ESDs, records invariants and returns a RunResult; the run
passes iff no enabled invariant failed.
"""
import logging
from dataclasses import dataclass, field
from math import exp, sqrt
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from src.errors import DimensionMismatch, PositivityError
from src.multiindex import MultiIndex, rank_PN
from src.operators import (
    CompactPerturbation,
    HermitianSymbol,
    WeightFamily,
    assemble_truncation,
    identity_terms,
    load_symbol_file,
    shift_word,
    symbol_range_bounds,
)
from src.spectral import (
    POSITIVITY_THRESHOLD,
    EmpiricalSpectralDistribution,
    LogFunction,
    TestFunction,
    empirical_distribution,
    geometric_mean,
    kolmogorov_distance,
    spectrum_containment,
)
from src.measure import ShardMap, integrate_pushforward
from src.diagnostics import (
    ConvergenceRow,
    ConvergenceTable,
    IntegrationSpec,
    PushforwardReference,
    SzegoGap,
    compact_decay_holds,
    compact_decay_table,
    folner_bound_sq,
    folner_table,
    pushforward_reference,
    shift_ratio_sq_exact,
    state_bound_holds,
    state_normalized,
    subadditivity_check,
    operator_szego_gap,
)
from src.experiments.config import ExperimentConfig
from src.experiments.pool import run_work_items
from src.experiments.report import ReportWriter

logger = logging.getLogger(__name__)

TREND_WINDOW = 5
CLOSED_FORM_TOLERANCE = 1e-12
MC_SIGMAS = 4


@dataclass
class RunResult:
    experiment: str
    output_dir: Path
    verdict_path: Path
    passed: bool
    failures: List[str] = field(default_factory=list)


def _finish(report: ReportWriter, summary: Dict) -> RunResult:
    path = report.write_verdict(summary)
    return RunResult(report.cfg.experiment, report.output_dir, path, report.passed, report.failures)


def _load_symbol(cfg: ExperimentConfig) -> Tuple[HermitianSymbol, Optional[CompactPerturbation]]:
    symbol, perturbation = load_symbol_file(cfg.symbol_file, complete=cfg.complete_hermitian)
    if symbol.dimension != cfg.dimension:
        raise DimensionMismatch(
            f"{cfg.symbol_file} defines a symbol on B_{symbol.dimension}, config has dimension {cfg.dimension}"
        )
    return symbol, perturbation


# ---------------------------------------------------------------------------
# Szegő limit
# ---------------------------------------------------------------------------

def _szego_point(item) -> Tuple[SzegoGap, EmpiricalSpectralDistribution, bool]:
    symbol, perturbation, weights, f, cutoff, reference, max_rank = item
    operator = assemble_truncation(symbol, weights, cutoff, perturbation, max_rank)
    gap, esd = operator_szego_gap(operator, f, reference)
    return gap, esd, state_bound_holds(operator, esd)


def _shard_map(cfg: ExperimentConfig) -> ShardMap:
    """Monte Carlo shards go through the same worker pool as the cutoffs."""
    def map_shards(fn, items):
        return run_work_items(fn, items, cfg.hardware.num_workers, desc="Sampling")
    return map_shards


def _check_positive(symbol: HermitianSymbol, cfg: ExperimentConfig) -> Tuple[float, float]:
    low, high = symbol_range_bounds(symbol, cfg.positivity_samples, cfg.seed)
    if low <= POSITIVITY_THRESHOLD:
        raise PositivityError(f"symbol {symbol.identifier} is not strictly positive on the sphere", value=low)
    return low, high


def run_szego(cfg: ExperimentConfig) -> RunResult:
    """Both sides of the Szegő limit over the cutoff schedule."""
    weights = cfg.weights()
    symbol, perturbation = _load_symbol(cfg)
    f: TestFunction = cfg.test_function_handle()
    report = ReportWriter(cfg)

    if isinstance(f, LogFunction):
        low, _ = _check_positive(symbol, cfg)
        report.record("positivity", True, sampled_min=low, samples=cfg.positivity_samples)

    spec = IntegrationSpec(cfg.mc_samples, cfg.seed, True, cfg.expansion_cap, _shard_map(cfg))
    reference: PushforwardReference = pushforward_reference(symbol, f, spec)
    logger.info(
        f"[Runner] ∫ {f.name}∘φ dσ = {reference.value:.10g}"
        + ("" if reference.exact else f" ± {reference.stderr:.2g} (Monte Carlo)")
    )

    items = [(symbol, perturbation, weights, f, n, reference, cfg.max_rank) for n in cfg.cutoffs]
    results = run_work_items(
        _szego_point, items, cfg.hardware.num_workers, desc="Szego",
        describe=lambda r: f"N={r[0].cutoff} gap={r[0].gap:.3g}",
    )

    table = ConvergenceTable(
        experiment="szego",
        metadata={"space": weights.label, "dimension": cfg.dimension, "symbol": symbol.identifier,
                  "test_function": f.name, "exact_rhs": reference.exact},
    )
    low, high = symbol_range_bounds(symbol, cfg.positivity_samples, cfg.seed)
    outside = {}
    for gap, esd, _ in results:
        bound = MC_SIGMAS * gap.rhs_stderr if not gap.exact else None
        table.add_row(ConvergenceRow(gap.cutoff, gap.rank, gap.lhs, gap.rhs, bound,
                                     {"rhs_stderr": gap.rhs_stderr}))
        report.write_esd(esd)
        outside[gap.cutoff] = spectrum_containment(esd, low, high)
    report.write_table(table)

    final = results[-1][0]
    allowed = cfg.gap_tolerance + MC_SIGMAS * final.rhs_stderr
    report.record("szego_final_gap", final.gap <= allowed, N=final.cutoff, gap=final.gap, allowed=allowed)
    if cfg.check_trend:
        report.record("szego_tail_trend", table.tail_non_increasing(TREND_WINDOW),
                      window=TREND_WINDOW, gaps=table.gaps()[-TREND_WINDOW:])
    report.record("state_normalized", state_normalized(weights, cfg.cutoffs[0]), N=cfg.cutoffs[0])
    report.record("state_bound", all(r[2] for r in results))
    # the interval claim is only classical for d = 1
    report.record("spectrum_containment", None, sampled_range=[low, high],
                  outside={str(n): k for n, k in outside.items()})

    if perturbation is not None:
        decay = compact_decay_table(perturbation, cfg.dimension, cfg.cutoffs)
        report.write_table(decay)
        report.record("compact_decay", compact_decay_holds(decay), trace_norm=perturbation.trace_norm())

    return _finish(report, {"final_gap": final.gap, "rhs": reference.value, "rhs_exact": reference.exact})


# ---------------------------------------------------------------------------
# Følner ratios
# ---------------------------------------------------------------------------

def _folner_point(item) -> ConvergenceRow:
    terms, weights, label, cutoff, norm, max_rank = item
    return folner_table(terms, weights, [cutoff], label, norm, max_rank).rows[0]


def _generators(dimension: int) -> List[Tuple[str, Dict, int, bool]]:
    ops = []
    for i in range(dimension):
        ops.append((f"S{i + 1}", shift_word(dimension, i), i, False))
        ops.append((f"S{i + 1}_adj", shift_word(dimension, i, adjoint=True), i, True))
    return ops


def _subadditivity_cutoff(cfg: ExperimentConfig) -> Optional[int]:
    # degree-one words: the product check assembles up to N + 3
    fitting = [n for n in cfg.cutoffs if rank_PN(cfg.dimension, n + 3) <= cfg.max_rank]
    return fitting[-1] if fitting else None


def run_folner(cfg: ExperimentConfig) -> RunResult:
    """Commutator and corner ratios for every S_i and S_i* (and the configured symbol, if any)."""
    weights = cfg.weights()
    report = ReportWriter(cfg)
    norm = cfg.folner_norm

    ops = [(label, terms) for label, terms, _, _ in _generators(cfg.dimension)]
    if cfg.symbol_file:
        symbol, _ = _load_symbol(cfg)
        ops.append((symbol.identifier, symbol.terms))

    items = [(terms, weights, label, n, norm, cfg.max_rank) for label, terms in ops for n in cfg.cutoffs]
    rows = run_work_items(_folner_point, items, cfg.hardware.num_workers, desc="Folner")

    tables: Dict[str, ConvergenceTable] = {}
    for (_, _, label, _, _, _), row in zip(items, rows):
        if label not in tables:
            tables[label] = ConvergenceTable(
                experiment=f"folner_{label}",
                metadata={"space": weights.label, "dimension": cfg.dimension, "norm": norm, "operator": label},
            )
        tables[label].add_row(row)
    for table in tables.values():
        report.write_table(table)

    for label, _, i, adjoint in _generators(cfg.dimension):
        table = tables[label]
        if norm == "hs":
            error = max(abs(r.lhs - r.aux["closed_form"]) for r in table.rows)
            report.record(f"closed_form_{label}", error <= CLOSED_FORM_TOLERANCE, max_error=error)
        if weights.is_drury_arveson:
            bounded = all(
                shift_ratio_sq_exact(weights, i, n) <= folner_bound_sq(cfg.dimension, n) for n in cfg.cutoffs
            )
            report.record(f"bound_{label}", bounded)
            if cfg.dimension <= 2 and not adjoint and norm == "hs":
                error = max(abs(r.lhs - 1 / sqrt(r.cutoff + 1)) for r in table.rows)
                report.record(f"inverse_sqrt_rate_{label}", error <= CLOSED_FORM_TOLERANCE, max_error=error)
    if cfg.check_trend:
        for label, table in tables.items():
            report.record(f"vanishing_{label}", table.tail_non_increasing(TREND_WINDOW),
                          final_ratio=float(table.rows[-1].lhs))

    n = _subadditivity_cutoff(cfg)
    if n is None:
        report.record("subadditivity", None, skipped="no cutoff fits under max_rank")
    else:
        a = shift_word(cfg.dimension, 0)
        b = shift_word(cfg.dimension, cfg.dimension - 1, adjoint=True)
        check = subadditivity_check(a, b, weights, n, cfg.max_rank)
        report.record("subadditivity", check.sum_holds and check.product_holds,
                      operators=["S1", f"S{cfg.dimension}_adj"], norms_are_compressions=True,
                      **check.to_dict())

    identity = folner_table(identity_terms(cfg.dimension), weights, cfg.cutoffs[:1], "identity")
    report.record("identity_commutes", identity.rows[0].lhs == 0.0)

    return _finish(report, {label: float(t.rows[-1].lhs) for label, t in tables.items()})


# ---------------------------------------------------------------------------
# Bergman versus Drury-Arveson
# ---------------------------------------------------------------------------

def weight_ratio(compared: WeightFamily, reference: WeightFamily, cutoff: int) -> float:
    """Ratio of the first-coordinate shift weights at |m| = N (compared / reference)."""
    m = MultiIndex((cutoff,) + (0,) * (reference.dimension - 1))
    return sqrt(compared.step_weight_sq(m, 0) / reference.step_weight_sq(m, 0))


def _bergman_point(item):
    symbol, perturbation, reference, compared, cutoff, max_rank = item
    esd_ref = empirical_distribution(assemble_truncation(symbol, reference, cutoff, perturbation, max_rank))
    esd_cmp = empirical_distribution(assemble_truncation(symbol, compared, cutoff, perturbation, max_rank))
    return esd_ref, esd_cmp, kolmogorov_distance(esd_ref, esd_cmp), weight_ratio(compared, reference, cutoff)


def run_bergman_comparison(cfg: ExperimentConfig) -> RunResult:
    """Kolmogorov distance between the configured space's ESDs and the Drury-Arveson ones."""
    compared = cfg.weights()
    reference = WeightFamily.drury_arveson(cfg.dimension)
    symbol, perturbation = _load_symbol(cfg)
    report = ReportWriter(cfg)

    items = [(symbol, perturbation, reference, compared, n, cfg.max_rank) for n in cfg.cutoffs]
    results = run_work_items(
        _bergman_point, items, cfg.hardware.num_workers, desc="Bergman",
        describe=lambda r: f"N={r[1].cutoff} KS={r[2]:.3g}",
    )

    table = ConvergenceTable(
        experiment="bergman",
        metadata={"reference": reference.label, "compared": compared.label, "symbol": symbol.identifier},
    )
    for esd_ref, esd_cmp, distance, ratio in results:
        table.add_row(ConvergenceRow(esd_cmp.cutoff, esd_cmp.rank, distance, 0.0, None, {
            "weight_ratio": ratio,
            "mean_reference": float(esd_ref.eigenvalues.mean()),
            "mean_compared": float(esd_cmp.eigenvalues.mean()),
        }))
        report.write_esd(esd_cmp)
        report.write_esd(esd_ref, prefix="esd_reference")
    report.write_table(table)

    ratios = [r.aux["weight_ratio"] for r in table.rows]
    monotone = all(b >= a for a, b in zip(ratios, ratios[1:])) and ratios[-1] <= 1.0 + CLOSED_FORM_TOLERANCE
    report.record("weight_ratio_limit", monotone, final_ratio=ratios[-1], distance_to_one=1.0 - ratios[-1])
    if cfg.check_trend:
        report.record("kolmogorov_trend", table.tail_trend_decreasing(TREND_WINDOW),
                      distances=table.gaps()[-TREND_WINDOW:])
    return _finish(report, {"final_distance": table.final_gap, "final_weight_ratio": ratios[-1]})


# ---------------------------------------------------------------------------
# Determinant limit
# ---------------------------------------------------------------------------

def _determinant_point(item) -> Tuple[EmpiricalSpectralDistribution, float]:
    symbol, perturbation, weights, cutoff, max_rank = item
    esd = empirical_distribution(assemble_truncation(symbol, weights, cutoff, perturbation, max_rank))
    return esd, geometric_mean(esd)


def log_mean_reference(
    symbol: HermitianSymbol, samples: int, seed: int, map_shards: Optional[ShardMap] = None
) -> Tuple[float, float]:
    """exp(∫ log φ dσ) with its standard error (delta method); exact for constants."""
    if symbol.is_constant:
        zero = MultiIndex.zero(symbol.dimension)
        return float(symbol.coefficient(zero, zero).real), 0.0
    mean, stderr = integrate_pushforward(symbol, LogFunction(), samples, seed, map_shards)
    value = exp(mean)
    return value, value * stderr


def run_determinant(cfg: ExperimentConfig) -> RunResult:
    """det(P_N T P_N)^{1/d_N} against exp(∫ log φ dσ)."""
    weights = cfg.weights()
    symbol, perturbation = _load_symbol(cfg)
    report = ReportWriter(cfg)

    low, high = _check_positive(symbol, cfg)
    report.record("positivity", True, sampled_range=[low, high], samples=cfg.positivity_samples)
    rhs, stderr = log_mean_reference(symbol, cfg.mc_samples, cfg.seed, _shard_map(cfg))
    logger.info(f"[Runner] exp(∫ log φ dσ) = {rhs:.10g} ± {stderr:.2g}")

    items = [(symbol, perturbation, weights, n, cfg.max_rank) for n in cfg.cutoffs]
    results = run_work_items(
        _determinant_point, items, cfg.hardware.num_workers, desc="Determinant",
        describe=lambda r: f"N={r[0].cutoff} G={r[1]:.6g}",
    )

    allowed = MC_SIGMAS * stderr + cfg.determinant_tolerance
    table = ConvergenceTable(
        experiment="determinant",
        metadata={"space": weights.label, "dimension": cfg.dimension, "symbol": symbol.identifier},
    )
    for esd, gm in results:
        table.add_row(ConvergenceRow(esd.cutoff, esd.rank, gm, rhs, allowed, {"rhs_stderr": stderr}))
        report.write_esd(esd)
    report.write_table(table)

    final = table.rows[-1]
    report.record("determinant_limit", float(final.gap) <= allowed,
                  N=final.cutoff, gap=float(final.gap), allowed=allowed)
    return _finish(report, {"geometric_mean": float(final.lhs), "rhs": rhs, "rhs_stderr": stderr})


RUNNERS: Dict[str, Callable[[ExperimentConfig], RunResult]] = {
    "szego": run_szego,
    "folner": run_folner,
    "bergman": run_bergman_comparison,
    "determinant": run_determinant,
}


def run_experiment(cfg: ExperimentConfig) -> RunResult:
    logger.info(f"[Runner] {cfg.experiment} '{cfg.name}' on {cfg.weights().label}, d={cfg.dimension}, "
                f"N={list(cfg.cutoffs)}")
    return RUNNERS[cfg.experiment](cfg)
