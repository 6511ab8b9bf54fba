"""
Test functions f for the Szegő averages (1/d_N) Σ f(λ_i) and ∫ f∘φ dσ.

Polynomials keep the sphere side exactly computable; log gives the
determinant functional.
"""
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from src.errors import ConfigError, DomainError

POSITIVITY_THRESHOLD = 1e-12


class TestFunction:
    """A vectorized scalar function with a declared domain."""
    __test__ = False
    name: str = "f"

    @property
    def is_polynomial(self) -> bool:
        return False

    def __call__(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class PolynomialFunction(TestFunction):
    """f(x) = Σ_k coefficients[k] x^k."""
    coefficients: Tuple[float, ...]

    @property
    def name(self) -> str:
        return "poly(" + ",".join(f"{c:g}" for c in self.coefficients) + ")"

    @property
    def is_polynomial(self) -> bool:
        return True

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        # Horner; a plain loop keeps results bit-reproducible
        x = np.asarray(x, dtype=float)
        result = np.zeros_like(x)
        for c in reversed(self.coefficients):
            result = result * x + c
        return result


@dataclass(frozen=True)
class MonomialFunction(PolynomialFunction):
    """f(x) = x^k."""

    @classmethod
    def of_power(cls, power: int) -> "MonomialFunction":
        return cls(tuple([0.0] * power + [1.0]))

    @property
    def name(self) -> str:
        return "x" if self.degree == 1 else f"x^{self.degree}"

    def __call__(self, x):
        return np.asarray(x, dtype=float) ** self.degree


@dataclass(frozen=True)
class LogFunction(TestFunction):
    """Natural log, defined only above the positivity threshold."""
    threshold: float = POSITIVITY_THRESHOLD
    name: str = "log"

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        bad = x <= self.threshold
        if bad.any():
            raise DomainError("log needs strictly positive arguments", value=float(x[bad][0]))
        return np.log(x)


def make_test_function(spec: str, coefficients: Optional[Sequence[float]] = None) -> TestFunction:
    """
    Build a test function from its config name.

    Args:
        spec: one of "x", "x^2", "x^3", "x^4", "log", "poly"
        coefficients: ascending coefficients, required for "poly"
    """
    spec = spec.strip().lower()
    if spec == "log":
        return LogFunction()
    if spec == "x":
        return MonomialFunction.of_power(1)
    if spec.startswith("x^"):
        try:
            power = int(spec[2:])
        except ValueError:
            raise ConfigError(f"unknown test function {spec!r}")
        if not 1 <= power <= 4:
            raise ConfigError(f"monomial test functions go up to x^4, got {spec!r}")
        return MonomialFunction.of_power(power)
    if spec in ("poly", "custom-polynomial"):
        if not coefficients:
            raise ConfigError("polynomial test function needs coefficients")
        return PolynomialFunction(tuple(float(c) for c in coefficients))
    raise ConfigError(f"unknown test function {spec!r}")


def apply_test_function(f: Union[TestFunction, Callable], values: np.ndarray) -> np.ndarray:
    """Evaluate f and reject any non-finite output, naming the argument that caused it."""
    values = np.asarray(values, dtype=float)
    with np.errstate(all="ignore"):
        out = np.asarray(f(values), dtype=float)
    out = np.broadcast_to(out, values.shape)
    bad = ~np.isfinite(out)
    if bad.any():
        raise DomainError(f"test function {getattr(f, 'name', f)} is undefined", value=float(values[bad][0]))
    return out
