"""
Tests for shift weights, symbols, perturbations and truncation assembly.

This test verifies that:
1. Shift columns carry the Drury-Arveson and Bergman weights
2. Assembled truncations are exact and bit-for-bit Hermitian
3. Exact traces agree with the closed form and with the matrices

Run with: python -m pytest tests/test_operators.py -v
Or standalone: python tests/test_operators.py
"""
import sys
import os
import json
import logging
from fractions import Fraction
from math import sqrt

import numpy as np
import pytest

# Setup logging
logging.basicConfig(level=logging.INFO, format='%(asctime)s [Test] %(message)s')
logger = logging.getLogger(__name__)

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.errors import (
    ConfigError,
    DimensionMismatch,
    DomainError,
    PreconditionError,
    RankCapExceeded,
    SymbolFileError,
    UnsupportedWeightFamily,
)
from src.multiindex import GradedBasisIndexer, MultiIndex, enumerate_slab, rank_PN
from src.operators import (
    CompactPerturbation,
    HermitianSymbol,
    WeightFamily,
    assemble_matrix,
    assemble_perturbation,
    assemble_truncation,
    commutator_norm_sq_assembled,
    commutator_norm_sq_exact,
    entry_lines,
    load_symbol_file,
    mixed_word_trace_is_zero,
    parse_symbol_document,
    shift_column,
    shift_matrix,
    shift_word,
    symbol_eval,
    symbol_range_bounds,
    trace_enumerated,
    trace_exact,
)

E1 = MultiIndex.of(1, 0)
ZERO2 = MultiIndex.zero(2)


def z1_plus_conj() -> HermitianSymbol:
    return HermitianSymbol.from_terms(2, [(E1, ZERO2, 1.0)], name="z1_plus_conj")


def z1bar_z1() -> HermitianSymbol:
    return HermitianSymbol.from_terms(2, [(E1, E1, 1.0)], name="z1bar_z1")


def test_shift_column():
    """S^γ e_m for the documented examples."""
    da = WeightFamily.drury_arveson(2)
    assert shift_column(da, E1, ZERO2) == (E1, 1.0)
    index, weight = shift_column(da, E1, MultiIndex.of(0, 1))
    assert index == MultiIndex.of(1, 1)
    assert weight == pytest.approx(sqrt(0.5), abs=1e-15)
    m = MultiIndex.of(3, 2)
    assert shift_column(da, ZERO2, m) == (m, 1.0)

    bergman = WeightFamily.bergman(2, 0.0)
    assert bergman.step_weight_sq(ZERO2, 0) == Fraction(1, 4)
    assert bergman.step_weight_sq(MultiIndex.of(1, 0), 0) == Fraction(2, 5)

    logger.info("✓ Shift columns carry the expected weights")


def test_word_weight_is_path_independent():
    """‖S^γ e_m‖² does not depend on the order the coordinates are raised in."""
    for weights in (WeightFamily.drury_arveson(3), WeightFamily.bergman(3, 1.5)):
        gamma = MultiIndex.of(2, 1, 1)
        m = MultiIndex.of(1, 0, 3)
        reference = weights.word_weight_sq(gamma, m)
        for order in [(0, 0, 1, 2), (2, 1, 0, 0), (0, 2, 0, 1)]:
            assert weights.word_weight_sq(gamma, m, order) == reference
        with pytest.raises(ConfigError):
            weights.word_weight_sq(gamma, m, (0, 1, 2))

    logger.info("✓ Word weights are independent of the raising order")


def test_weight_family_validation():
    with pytest.raises(ConfigError):
        WeightFamily.bergman(2, -1.0)
    with pytest.raises(ConfigError):
        WeightFamily.drury_arveson(0)
    assert WeightFamily.bergman(2, 1).label == "bergman(a=1)"

    logger.info("✓ Weight families validate their parameters")


def test_assemble_examples():
    """The three hand-computed truncations."""
    da = WeightFamily.drury_arveson(2)
    op = assemble_truncation(z1_plus_conj(), da, 1)
    expected = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=complex)
    assert np.array_equal(op.matrix, expected)

    one = HermitianSymbol.constant(2, 1.0)
    for n in (0, 3, 6):
        assert np.array_equal(assemble_truncation(one, da, n).matrix, np.eye(rank_PN(2, n)))

    op = assemble_truncation(z1bar_z1(), da, 1)
    assert np.allclose(op.matrix, np.diag([1.0, 1.0, 0.5]), atol=1e-15)
    assert op.rank == 3
    assert op.describe()["symbol"] == "z1bar_z1"

    logger.info("✓ Hand-computed truncations reproduced")


def test_assembly_is_exactly_hermitian():
    """Random complex symbols assemble to matrices equal to their conjugate transpose."""
    rng = np.random.default_rng(7)
    for d in (1, 2, 3):
        basis = [a for j in range(3) for a in enumerate_slab(d, j)]
        chosen = {}
        for _ in range(6):
            alpha, beta = basis[rng.integers(len(basis))], basis[rng.integers(len(basis))]
            if (beta, alpha) in chosen:
                continue
            c = rng.normal() if alpha == beta else complex(rng.normal(), rng.normal())
            chosen[(alpha, beta)] = c
        symbol = HermitianSymbol.from_terms(d, [(a, b, c) for (a, b), c in chosen.items()])
        for weights in (WeightFamily.drury_arveson(d), WeightFamily.bergman(d, 0.5)):
            op = assemble_truncation(symbol, weights, 4)
            assert op.is_hermitian()
            general = assemble_matrix(symbol.terms, weights, 4)
            assert np.allclose(op.matrix, general, atol=1e-13)

    logger.info("✓ Truncations are bit-for-bit Hermitian and match general assembly")


def test_truncation_is_compression():
    """P_M (P_N T P_N) P_M = P_M T P_M for M ≤ N: entries do not depend on the cutoff."""
    da = WeightFamily.drury_arveson(2)
    symbol = HermitianSymbol.from_terms(2, [(MultiIndex.of(2, 0), MultiIndex.of(0, 1), 0.5 - 0.25j), (E1, E1, 1.0)])
    big = assemble_truncation(symbol, da, 8)
    small = assemble_truncation(symbol, da, 5)
    assert np.allclose(big.block(5), small.matrix, atol=1e-14)

    logger.info("✓ Smaller truncations are blocks of larger ones")


def test_assembly_errors():
    da = WeightFamily.drury_arveson(2)
    with pytest.raises(DimensionMismatch):
        assemble_truncation(HermitianSymbol.constant(3, 1.0), da, 2)
    with pytest.raises(RankCapExceeded):
        assemble_truncation(z1bar_z1(), da, 40, max_rank=100)
    source = GradedBasisIndexer(2, 3)
    with pytest.raises(PreconditionError):
        shift_matrix(da, E1, source, GradedBasisIndexer(2, 3))

    logger.info("✓ Assembly rejects mismatched dimensions and oversized truncations")


def test_trace_exact_examples():
    da = WeightFamily.drury_arveson(2)
    assert trace_exact(E1, da, 0) == 1
    assert trace_exact(E1, da, 1) == Fraction(5, 2)
    for n in range(6):
        assert trace_exact(ZERO2, da, n) == rank_PN(2, n)
    with pytest.raises(UnsupportedWeightFamily):
        trace_exact(E1, WeightFamily.bergman(2), 3)

    logger.info("✓ Exact traces match the worked examples")


def test_trace_identity_sweep():
    """Closed form and enumeration agree for d ≤ 3, |α| ≤ 3, N ≤ 15."""
    checked = 0
    for d in (1, 2, 3):
        weights = WeightFamily.drury_arveson(d)
        for degree in range(4):
            for alpha in enumerate_slab(d, degree):
                for n in range(16):
                    trace_exact(alpha, weights, n)  # raises on disagreement
                    checked += 1

    logger.info(f"✓ Trace identity holds on {checked} instances")


def test_trace_matches_matrix():
    """The assembled diagonal reproduces the exact traces for both families."""
    for weights in (WeightFamily.drury_arveson(2), WeightFamily.bergman(2, 1.0)):
        alpha = MultiIndex.of(1, 1)
        symbol = HermitianSymbol.from_terms(2, [(alpha, alpha, 1.0)])
        for n in (0, 3, 7):
            op = assemble_truncation(symbol, weights, n)
            assert op.trace() == pytest.approx(float(trace_enumerated(alpha, weights, n)), rel=1e-12)

    logger.info("✓ Matrix traces match the exact sums")


def test_mixed_word_traces():
    assert mixed_word_trace_is_zero(E1, MultiIndex.of(0, 1), 5)
    assert mixed_word_trace_is_zero(MultiIndex.of(2), MultiIndex.of(0), 10)
    assert mixed_word_trace_is_zero(MultiIndex.of(1, 0, 0), MultiIndex.of(1, 1, 0), 4)
    with pytest.raises(PreconditionError):
        mixed_word_trace_is_zero(E1, E1, 3)

    logger.info("✓ Mixed words have zero trace")


def test_commutator_norms():
    """‖S_1 P_N − P_N S_1‖₂² = (N+2)/2 at d = 2, exact and assembled."""
    da = WeightFamily.drury_arveson(2)
    for n in range(12):
        exact = commutator_norm_sq_exact(da, 0, n)
        assert exact == Fraction(n + 2, 2)
        assert commutator_norm_sq_assembled(da, 0, n) == pytest.approx(float(exact), rel=1e-12)

    logger.info("✓ Shift commutator norms match the closed form")


def test_symbol_construction():
    symbol = z1_plus_conj()
    assert set(symbol.terms) == {(E1, ZERO2), (ZERO2, E1)}
    with pytest.raises(ConfigError):
        HermitianSymbol.from_terms(2, [(E1, ZERO2, 1.0)], complete=False)

    # |z1 + z2|² built as p(S)* p(S)
    p = {MultiIndex.of(1, 0): 1.0, MultiIndex.of(0, 1): 1.0}
    square = HermitianSymbol.hermitian_square(2, p)
    assert symbol_eval(square, [1.0, 0.0]) == pytest.approx(1.0)
    assert symbol_eval(square, [1 / sqrt(2), 1 / sqrt(2)]) == pytest.approx(2.0)
    op = assemble_truncation(square, WeightFamily.drury_arveson(2), 5)
    assert np.linalg.eigvalsh(op.matrix).min() > -1e-12

    shifted = symbol.shifted(3.0).scaled(2.0)
    assert shifted.coefficient(ZERO2, ZERO2) == 6.0
    assert shifted.coefficient(E1, ZERO2) == 2.0

    logger.info("✓ Symbols complete, validate and compose")


def test_symbol_eval():
    one = HermitianSymbol.constant(2, 1.0)
    assert symbol_eval(one, [0.6, 0.8j]) == pytest.approx(1.0)
    assert symbol_eval(z1_plus_conj(), [1.0, 0.0]) == pytest.approx(2.0)
    assert symbol_eval(z1bar_z1(), [1 / sqrt(2), 1 / sqrt(2)]) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        symbol_eval(one, [1.0, 1.0])

    logger.info("✓ Symbol evaluation on the sphere")


def test_symbol_range_bounds():
    assert symbol_range_bounds(HermitianSymbol.constant(2, 2.5), 10) == (2.5, 2.5)
    low, high = symbol_range_bounds(HermitianSymbol.from_terms(1, [(MultiIndex.of(1), MultiIndex.of(0), 1.0)]), 50_000, 1)
    assert -2.0 <= low < -1.99 and 1.99 < high <= 2.0
    low, high = symbol_range_bounds(z1bar_z1(), 50_000, 1)
    assert 0.0 <= low < 0.01 and 0.99 < high <= 1.0

    logger.info(f"✓ Sampled ranges enclose the true ranges: ({low:.4f}, {high:.4f})")


def test_perturbation():
    k = CompactPerturbation.from_entries([(0, 0, 1.0), (1, 2, 0.5 - 0.25j)])
    assert k.entries[(2, 1)] == 0.5 + 0.25j
    assert k.support_size == 3
    assert k.diagonal_sum(10) == 1.0
    block = k.compressed(4)
    assert np.array_equal(block, block.conj().T)
    assert k.trace_norm() == pytest.approx(1.0 + 2 * abs(0.5 - 0.25j))
    with pytest.raises(ConfigError):
        CompactPerturbation.from_entries([(0, 1, 1.0)], complete=False)

    op = assemble_perturbation(k, WeightFamily.drury_arveson(2), 1)
    assert op.matrix[0, 0] == 1.0 and op.matrix[1, 2] == 0.5 - 0.25j

    logger.info("✓ Perturbations complete, compress and measure their trace norm")


def test_symbol_files(tmp_path):
    good = tmp_path / "z1bar_z1.json"
    good.write_text(json.dumps({
        "dimension": 2,
        "terms": [{"alpha": [1, 0], "beta": [1, 0], "re": 1.0}],
        "perturbation": [[0, 0, 1.0]],
    }))
    symbol, perturbation = load_symbol_file(str(good))
    assert symbol.identifier == "z1bar_z1"
    assert perturbation.diagonal_sum(1) == 1.0

    bad = tmp_path / "broken.json"
    bad.write_text('{\n  "dimension": 2,\n  "terms": [\n    {"alpha": [1, 0] "beta": [0, 0]}\n  ]\n}\n')
    with pytest.raises(SymbolFileError) as info:
        load_symbol_file(str(bad))
    assert info.value.line == 4
    assert info.value.exit_code == 2

    with pytest.raises(SymbolFileError):
        parse_symbol_document({"dimension": 2, "terms": [{"alpha": [1], "beta": [0, 0], "re": 1}]})
    with pytest.raises(SymbolFileError):
        load_symbol_file(str(tmp_path / "missing.json"))

    logger.info("✓ Symbol files load and report parse errors with line numbers")


def test_symbol_file_structure_errors(tmp_path):
    term = {"alpha": [1, 0], "beta": [1, 0], "re": 1.0}
    malformed = {
        "term_not_object": {"dimension": 2, "terms": [[1, 0]]},
        "term_missing_beta": {"dimension": 2, "terms": [{"alpha": [1, 0], "re": 1.0}]},
        "terms_not_list": {"dimension": 2, "terms": {"alpha": [1, 0]}},
        "bad_coefficient": {"dimension": 2, "terms": [{"alpha": [1, 0], "beta": [1, 0], "re": "one"}]},
        "perturbation_missing_col": {"dimension": 2, "terms": [term], "perturbation": [{"row": 0, "re": 1}]},
        "perturbation_short_list": {"dimension": 2, "terms": [term], "perturbation": [[0, 0]]},
        "perturbation_float_row": {"dimension": 2, "terms": [term], "perturbation": [[0.5, 0, 1.0]]},
        "perturbation_scalar": {"dimension": 2, "terms": [term], "perturbation": [3]},
        "dimension_bool": {"dimension": True, "terms": [term]},
    }
    for label, document in malformed.items():
        with pytest.raises(SymbolFileError):
            parse_symbol_document(document, f"{label}.json")

    # second term sits on line 5, second perturbation entry on line 9
    path = tmp_path / "located.json"
    path.write_text(
        '{\n'
        '  "dimension": 2,\n'
        '  "terms": [\n'
        '    {"alpha": [1, 0], "beta": [1, 0], "re": 1.0},\n'
        '    [0, 1]\n'
        '  ],\n'
        '  "perturbation": [\n'
        '    {"row": 0, "col": 0, "re": 1.0},\n'
        '    {"row": 1, "re": 2.0}\n'
        '  ]\n'
        '}\n'
    )
    with pytest.raises(SymbolFileError) as info:
        load_symbol_file(str(path))
    assert info.value.line == 5
    assert info.value.exit_code == 2
    assert f"{path}:5" in str(info.value)

    document = json.loads(path.read_text())
    document["terms"].pop()
    path.write_text(json.dumps(document, indent=2))
    lines = entry_lines(path.read_text(), "perturbation")
    with pytest.raises(SymbolFileError) as info:
        load_symbol_file(str(path))
    assert info.value.line == lines[1]

    assert entry_lines('{"terms": [\n {"a": [1, 2]},\n\n [3]\n]}', "terms") == [2, 4]
    assert entry_lines('{"terms": []}', "terms") == []
    assert entry_lines('{"dimension": 1}', "perturbation") == []

    logger.info("✓ Malformed symbol entries raise SymbolFileError with the entry's line")


def test_perturbation_is_exactly_hermitian():
    v = 0.5 - 0.25j
    nearly = v.conjugate() + 1e-14
    k = CompactPerturbation.from_entries([(1, 2, v), (2, 1, nearly), (0, 0, 1.0 + 1e-15j)], complete=False)
    assert k.entries[(2, 1)] == v.conjugate()
    assert k.entries[(0, 0)] == 1.0
    block = k.compressed(3)
    assert np.array_equal(block, block.conj().T)

    op = assemble_truncation(z1bar_z1(), WeightFamily.drury_arveson(2), 2, k)
    assert op.is_hermitian()

    logger.info("✓ Near-conjugate perturbation pairs are stored as exact mirrors")


def test_general_words():
    """S_1 and S_1* assemble to transposes of each other."""
    da = WeightFamily.drury_arveson(2)
    up = assemble_matrix(shift_word(2, 0), da, 4)
    down = assemble_matrix(shift_word(2, 0, adjoint=True), da, 4)
    assert np.array_equal(up.conj().T, down)
    assert np.count_nonzero(np.diag(up)) == 0

    logger.info("✓ Single shifts and adjoints assemble consistently")


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    logger.info("=" * 50)
    logger.info("Operator Assembly Test")
    logger.info("=" * 50)

    tests = [
        test_shift_column,
        test_word_weight_is_path_independent,
        test_weight_family_validation,
        test_assemble_examples,
        test_assembly_is_exactly_hermitian,
        test_truncation_is_compression,
        test_assembly_errors,
        test_trace_exact_examples,
        test_trace_identity_sweep,
        test_trace_matches_matrix,
        test_mixed_word_traces,
        test_commutator_norms,
        test_symbol_construction,
        test_symbol_eval,
        test_symbol_range_bounds,
        test_perturbation,
        lambda: test_symbol_files(Path(tempfile.mkdtemp())),
        lambda: test_symbol_file_structure_errors(Path(tempfile.mkdtemp())),
        test_perturbation_is_exactly_hermitian,
        test_general_words,
    ]

    passed = 0
    failed = 0

    for test in tests:
        try:
            test()
            passed += 1
        except Exception as e:
            logger.error(f"✗ {getattr(test, '__name__', 'test')} failed: {e}")
            failed += 1

    logger.info("=" * 50)
    logger.info(f"Results: {passed} passed, {failed} failed")

    sys.exit(0 if failed == 0 else 1)
