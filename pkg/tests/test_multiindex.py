"""
Tests for multi-index enumeration, ranking and the exact combinatorics.

This test verifies that:
1. Slabs come out in descending lexicographic order
2. rank/unrank are inverse bijections on the truncated basis
3. The Chu-Vandermonde identity holds exactly on random instances

Run with: python -m pytest tests/test_multiindex.py -v
Or standalone: python tests/test_multiindex.py
"""
import sys
import os
import logging
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

# Setup logging
logging.basicConfig(level=logging.INFO, format='%(asctime)s [Test] %(message)s')
logger = logging.getLogger(__name__)

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.errors import IndexRangeError, PreconditionError, RankCapExceeded
from src.multiindex import (
    GradedBasisIndexer,
    MultiIndex,
    chu_vandermonde_lhs,
    chu_vandermonde_rhs,
    enumerate_slab,
    multinomial,
    multinomial_norm_sq,
    rank_PN,
    slab_size,
    sphere_moment_limit,
)


def test_enumerate_slab():
    """Slabs are ordered lexicographically descending within a degree."""
    assert enumerate_slab(1, 5) == (MultiIndex.of(5),)
    assert enumerate_slab(2, 2) == (MultiIndex.of(2, 0), MultiIndex.of(1, 1), MultiIndex.of(0, 2))
    assert enumerate_slab(3, 0) == (MultiIndex.zero(3),)
    for d in range(1, 5):
        for j in range(6):
            assert len(enumerate_slab(d, j)) == slab_size(d, j)

    with pytest.raises(PreconditionError):
        enumerate_slab(0, 1)

    logger.info("✓ Slab enumeration order and sizes correct")


def test_rank_unrank():
    """Graded-lex ranks for d=2, N=2 and inverse round trip."""
    indexer = GradedBasisIndexer(2, 2)
    assert indexer.rank(MultiIndex.of(0, 0)) == 0
    assert indexer.rank(MultiIndex.of(1, 0)) == 1
    assert indexer.rank(MultiIndex.of(0, 1)) == 2
    assert indexer.rank(MultiIndex.of(2, 0)) == 3
    assert indexer.unrank(5) == MultiIndex.of(0, 2)

    for d, n in [(1, 7), (2, 6), (3, 4), (4, 3)]:
        indexer = GradedBasisIndexer(d, n)
        assert indexer.unrank(0) == MultiIndex.zero(d)
        for k, alpha in enumerate(indexer.basis):
            assert indexer.rank(alpha) == k
            assert indexer.unrank(k) == alpha
        assert list(indexer.basis) == sorted(indexer.basis)

    logger.info("✓ rank/unrank are inverse and respect the graded order")


def test_rank_errors():
    """Out-of-range ranks and indices raise range errors; the rank cap is enforced."""
    indexer = GradedBasisIndexer(2, 2)
    with pytest.raises(IndexRangeError):
        indexer.rank(MultiIndex.of(3, 0))
    with pytest.raises(IndexRangeError):
        indexer.unrank(6)
    with pytest.raises(IndexRangeError):
        indexer.unrank(-1)
    with pytest.raises(IndexError):
        indexer.unrank(100)
    with pytest.raises(RankCapExceeded):
        GradedBasisIndexer(3, 40, max_rank=100)

    logger.info("✓ Range errors and rank cap raised")


def test_rank_PN():
    """d_N examples and agreement with slab enumeration."""
    assert rank_PN(1, 7) == 8
    assert rank_PN(2, 2) == 6
    assert rank_PN(3, 1) == 4
    assert rank_PN(2, 40) == 861
    for d in range(1, 5):
        for n in range(8):
            assert rank_PN(d, n) == sum(len(enumerate_slab(d, j)) for j in range(n + 1))
            assert GradedBasisIndexer(d, n).total_rank == rank_PN(d, n)

    logger.info("✓ rank_PN matches enumeration")


def test_multinomials():
    assert multinomial_norm_sq(MultiIndex.zero(3)) == 1
    assert multinomial_norm_sq(MultiIndex.of(1, 1)) == Fraction(1, 2)
    assert multinomial_norm_sq(MultiIndex.of(2, 0)) == 1
    assert multinomial(MultiIndex.of(2, 1, 1)) == 12
    assert sphere_moment_limit(MultiIndex.of(1, 0)) == Fraction(1, 2)
    assert sphere_moment_limit(MultiIndex.of(1, 1)) == Fraction(1, 6)

    logger.info("✓ Multinomial norms and sphere moments correct")


def test_chu_vandermonde_examples():
    assert chu_vandermonde_lhs(MultiIndex.of(1, 1), 2) == 10
    assert chu_vandermonde_rhs(MultiIndex.of(1, 1), 2) == 10
    for d in range(1, 4):
        for j in range(6):
            zero = MultiIndex.zero(d)
            assert chu_vandermonde_lhs(zero, j) == chu_vandermonde_rhs(zero, j) == slab_size(d, j)
    assert chu_vandermonde_lhs([3, 0, 2], 0) == chu_vandermonde_rhs([3, 0, 2], 0) == 1

    logger.info("✓ Chu-Vandermonde examples hold")


@settings(max_examples=500, deadline=None)
@given(
    k=st.lists(st.integers(min_value=0, max_value=8), min_size=1, max_size=5),
    j=st.integers(min_value=0, max_value=12),
)
def test_chu_vandermonde_property(k, j):
    """Σ_{|w|=j} Π C(k_i+w_i, w_i) = C(|k|+j+d−1, j) exactly."""
    assert chu_vandermonde_lhs(k, j) == chu_vandermonde_rhs(k, j)


if __name__ == "__main__":
    logger.info("=" * 50)
    logger.info("Multi-index Test")
    logger.info("=" * 50)

    tests = [
        test_enumerate_slab,
        test_rank_unrank,
        test_rank_errors,
        test_rank_PN,
        test_multinomials,
        test_chu_vandermonde_examples,
        test_chu_vandermonde_property,
    ]

    passed = 0
    failed = 0

    for test in tests:
        try:
            test()
            passed += 1
        except Exception as e:
            logger.error(f"✗ {test.__name__} failed: {e}")
            failed += 1

    logger.info("=" * 50)
    logger.info(f"Results: {passed} passed, {failed} failed")

    sys.exit(0 if failed == 0 else 1)
