# Eigenvalue distributions of finite sections
from .functions import (
    POSITIVITY_THRESHOLD,
    LogFunction,
    MonomialFunction,
    PolynomialFunction,
    TestFunction,
    apply_test_function,
    make_test_function,
)
from .esd import (
    EmpiricalSpectralDistribution,
    chi_N,
    eigenvalues_hermitian,
    empirical_distribution,
    esd_mean_of,
    geometric_mean,
    kolmogorov_distance,
    spectrum_containment,
    tridiagonal_toeplitz_eigenvalues,
)

__all__ = [
    "POSITIVITY_THRESHOLD",
    "LogFunction",
    "MonomialFunction",
    "PolynomialFunction",
    "TestFunction",
    "apply_test_function",
    "make_test_function",
    "EmpiricalSpectralDistribution",
    "chi_N",
    "eigenvalues_hermitian",
    "empirical_distribution",
    "esd_mean_of",
    "geometric_mean",
    "kolmogorov_distance",
    "spectrum_containment",
    "tridiagonal_toeplitz_eigenvalues",
]
