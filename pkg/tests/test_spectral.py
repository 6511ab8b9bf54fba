"""
Tests for the eigen-solver, empirical spectral distributions and test functions.

Run with: python -m pytest tests/test_spectral.py -v
Or standalone: python tests/test_spectral.py
"""
import sys
import os
import logging

import numpy as np
import pytest

# Setup logging
logging.basicConfig(level=logging.INFO, format='%(asctime)s [Test] %(message)s')
logger = logging.getLogger(__name__)

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.errors import ConfigError, DomainError, PositivityError, SpectralError
from src.multiindex import MultiIndex, rank_PN
from src.operators import HermitianSymbol, WeightFamily, assemble_truncation
from src.spectral import (
    EmpiricalSpectralDistribution,
    LogFunction,
    MonomialFunction,
    PolynomialFunction,
    chi_N,
    eigenvalues_hermitian,
    empirical_distribution,
    esd_mean_of,
    geometric_mean,
    kolmogorov_distance,
    make_test_function,
    spectrum_containment,
    tridiagonal_toeplitz_eigenvalues,
)

E1 = MultiIndex.of(1, 0)
ZERO2 = MultiIndex.zero(2)


def hardy_symbol() -> HermitianSymbol:
    """2 + z + z̄ on the circle."""
    zero, one = MultiIndex.of(0), MultiIndex.of(1)
    return HermitianSymbol.from_terms(1, [(zero, zero, 2.0), (one, zero, 1.0)], name="hardy")


def test_eigenvalues_examples():
    values = eigenvalues_hermitian(np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=complex))
    assert np.allclose(values, [-1.0, 0.0, 1.0], atol=1e-14)
    assert np.allclose(eigenvalues_hermitian(np.eye(5)), np.ones(5))
    assert np.allclose(eigenvalues_hermitian(np.diag([1.0, 1.0, 0.5])), [0.5, 1.0, 1.0])
    assert eigenvalues_hermitian(np.zeros((0, 0))).size == 0

    logger.info("✓ Eigenvalues of the worked examples")


def test_eigenvalues_reject_bad_input():
    with pytest.raises(SpectralError):
        eigenvalues_hermitian(np.array([[np.nan, 0.0], [0.0, 1.0]]))

    logger.info("✓ Non-finite matrices raise SpectralError")


def test_esd_basics():
    esd = EmpiricalSpectralDistribution.from_values([1.0, -1.0, 0.0], dimension=2, cutoff=1, symbol_id="s")
    assert list(esd.eigenvalues) == [-1.0, 0.0, 1.0]
    assert esd.rank == 3 and esd.support == (-1.0, 1.0)
    assert esd.cdf(0.0) == pytest.approx(2 / 3)
    with pytest.raises(ValueError):
        esd.eigenvalues[0] = 5.0
    with pytest.raises(SpectralError):
        EmpiricalSpectralDistribution.from_values([])

    logger.info("✓ ESDs are sorted, read-only and normalized")


def test_esd_mean_of():
    esd = EmpiricalSpectralDistribution.from_values([-1.0, 0.0, 1.0])
    assert esd_mean_of(MonomialFunction.of_power(2), esd) == pytest.approx(2 / 3)
    assert esd_mean_of(lambda x: np.ones_like(x), esd) == 1.0

    op = assemble_truncation(HermitianSymbol.constant(2, 3.5), WeightFamily.drury_arveson(2), 4)
    assert esd_mean_of(MonomialFunction.of_power(1), empirical_distribution(op)) == pytest.approx(3.5)

    with pytest.raises(DomainError) as info:
        esd_mean_of(LogFunction(), esd)
    assert info.value.value == -1.0

    logger.info("✓ ESD means of test functions")


def test_chi_N():
    da = WeightFamily.drury_arveson(2)
    op = assemble_truncation(HermitianSymbol.from_terms(2, [(E1, E1, 1.0)]), da, 1)
    assert chi_N(op) == pytest.approx(5 / 6, abs=1e-15)
    assert chi_N(op) == pytest.approx(esd_mean_of(MonomialFunction.of_power(1), empirical_distribution(op)), abs=1e-9)
    assert chi_N(assemble_truncation(HermitianSymbol.constant(2, 1.0), da, 6)) == 1.0

    logger.info("✓ χ_N matches the exact trace")


def test_geometric_mean():
    assert geometric_mean(EmpiricalSpectralDistribution.from_values(np.ones(6))) == pytest.approx(1.0)
    assert geometric_mean(EmpiricalSpectralDistribution.from_values([1.0, 1.0, 0.5])) == pytest.approx(0.5 ** (1 / 3))
    with pytest.raises(PositivityError):
        geometric_mean(EmpiricalSpectralDistribution.from_values([0.0, 1.0]))

    # classical case: det of the (N+1)-section of 2 + z + z̄ is N+2
    op = assemble_truncation(hardy_symbol(), WeightFamily.drury_arveson(1), 20)
    assert geometric_mean(empirical_distribution(op)) == pytest.approx(22 ** (1 / 21), rel=1e-9)

    logger.info("✓ Geometric means and positivity guard")


def test_kolmogorov_distance():
    a = EmpiricalSpectralDistribution.from_values([-1.0, 0.0, 1.0])
    b = EmpiricalSpectralDistribution.from_values([-1.0, 1.0])
    assert kolmogorov_distance(a, a) == 0.0
    assert kolmogorov_distance(np.zeros(4), np.ones(7)) == 1.0
    assert kolmogorov_distance(a, b) == pytest.approx(1 / 6)
    assert kolmogorov_distance(a, b) == kolmogorov_distance(b, a)
    with pytest.raises(SpectralError):
        kolmogorov_distance(a, [])

    logger.info("✓ Kolmogorov distances")


def test_spectral_invariants():
    """Constant symbols, shifts by c·1 and real scalings act on the spectrum as expected."""
    da = WeightFamily.drury_arveson(2)
    const = empirical_distribution(assemble_truncation(HermitianSymbol.constant(2, 2.0), da, 5))
    assert np.allclose(const.eigenvalues, 2.0, atol=1e-13) and const.rank == rank_PN(2, 5)

    symbol = HermitianSymbol.from_terms(2, [(E1, ZERO2, 1.0), (MultiIndex.of(1, 1), MultiIndex.of(0, 1), 0.3j)])
    base = empirical_distribution(assemble_truncation(symbol, da, 6)).eigenvalues
    shifted = empirical_distribution(assemble_truncation(symbol.shifted(1.5), da, 6)).eigenvalues
    scaled = empirical_distribution(assemble_truncation(symbol.scaled(-2.0), da, 6)).eigenvalues
    assert np.allclose(shifted, base + 1.5, atol=1e-12)
    assert np.allclose(scaled, np.sort(-2.0 * base), atol=1e-12)

    logger.info("✓ Spectrum shifts and scales with the symbol")


def test_hardy_reduction():
    """d = 1: the section of 2 + z + z̄ is the tridiagonal Toeplitz matrix."""
    op = assemble_truncation(hardy_symbol(), WeightFamily.drury_arveson(1), 100)
    esd = empirical_distribution(op)
    oracle = tridiagonal_toeplitz_eigenvalues(2.0, 1.0, 101)
    assert np.max(np.abs(esd.eigenvalues - oracle)) < 1e-8
    mean_square = esd_mean_of(MonomialFunction.of_power(2), esd)
    assert abs(mean_square - 6.0) < 0.15
    assert spectrum_containment(esd, 0.0, 4.0) == 0

    logger.info(f"✓ Classical Szegő reduction: mean λ² = {mean_square:.6f}")


def test_make_test_function():
    assert make_test_function("x").name == "x"
    assert make_test_function("x^3")(np.array([2.0]))[0] == 8.0
    assert isinstance(make_test_function("log"), LogFunction)
    poly = make_test_function("poly", [1.0, 0.0, 2.0])
    assert isinstance(poly, PolynomialFunction)
    assert poly(np.array([3.0]))[0] == 19.0
    for bad in ("x^5", "sin", "x^y"):
        with pytest.raises(ConfigError):
            make_test_function(bad)
    with pytest.raises(ConfigError):
        make_test_function("poly")

    logger.info("✓ Test functions parse from config names")


if __name__ == "__main__":
    logger.info("=" * 50)
    logger.info("Spectral Test")
    logger.info("=" * 50)

    tests = [
        test_eigenvalues_examples,
        test_eigenvalues_reject_bad_input,
        test_esd_basics,
        test_esd_mean_of,
        test_chi_N,
        test_geometric_mean,
        test_kolmogorov_distance,
        test_spectral_invariants,
        test_hardy_reduction,
        test_make_test_function,
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
