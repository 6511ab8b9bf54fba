"""
Shift weights of the Drury-Arveson and weighted Bergman spaces.

In the orthonormal monomial basis both d-shifts act by raising one
coordinate of the index with a positive weight:

    Drury-Arveson:  S_i e_m = √((m_i+1)/(|m|+1)) e_{m+e_i}
    Bergman(a):     S_i e_m = √((m_i+1)/(d+|m|+a+2)) e_{m+e_i}

Squared weights are kept as exact rationals; `a` enters through
`Fraction(float)`, which is exact.
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import sqrt
from typing import Optional, Sequence, Tuple

from src.errors import ConfigError, DimensionMismatch
from src.multiindex import MultiIndex


class SpaceKind(Enum):
    """Function spaces whose shifts we can truncate."""
    DRURY_ARVESON = "drury-arveson"
    BERGMAN = "bergman"


@dataclass(frozen=True)
class WeightFamily:
    """Shift weights for one space over the d-dimensional ball."""
    kind: SpaceKind
    dimension: int
    bergman_parameter: float = 0.0

    def __post_init__(self):
        if self.dimension < 1:
            raise ConfigError(f"dimension must be >= 1, got {self.dimension}")
        if self.kind is SpaceKind.BERGMAN and not self.bergman_parameter > -1:
            raise ConfigError(f"Bergman parameter must be > -1, got {self.bergman_parameter}")

    @classmethod
    def drury_arveson(cls, dimension: int) -> "WeightFamily":
        return cls(SpaceKind.DRURY_ARVESON, dimension)

    @classmethod
    def bergman(cls, dimension: int, a: float = 0.0) -> "WeightFamily":
        return cls(SpaceKind.BERGMAN, dimension, float(a))

    @property
    def is_drury_arveson(self) -> bool:
        return self.kind is SpaceKind.DRURY_ARVESON

    @property
    def label(self) -> str:
        if self.is_drury_arveson:
            return "drury-arveson"
        return f"bergman(a={self.bergman_parameter:g})"

    def step_weight_sq(self, m: MultiIndex, i: int) -> Fraction:
        """Squared weight of the single step e_m -> e_{m+e_i}."""
        numerator = Fraction(m[i] + 1)
        if self.is_drury_arveson:
            return numerator / (m.degree + 1)
        return numerator / (self.dimension + m.degree + 2 + Fraction(self.bergman_parameter))

    def word_weight_sq(
        self,
        gamma: MultiIndex,
        m: MultiIndex,
        order: Optional[Sequence[int]] = None,
    ) -> Fraction:
        """
        ‖S^γ e_m‖² as an exact rational.

        Args:
            gamma: the word exponent
            m: the basis index the word is applied to
            order: coordinate sequence to raise along (defaults to 0,0,..,1,1,..);
                must contain coordinate i exactly γ_i times
        """
        if gamma.dimension != self.dimension or m.dimension != self.dimension:
            raise DimensionMismatch(
                f"word {gamma} / index {m} do not match dimension {self.dimension}"
            )
        path = _raising_path(gamma, order)
        weight = Fraction(1)
        current = m
        for i in path:
            weight *= self.step_weight_sq(current, i)
            current = current.raised(i)
        return weight


def _raising_path(gamma: MultiIndex, order: Optional[Sequence[int]]) -> Tuple[int, ...]:
    if order is None:
        return tuple(i for i, g in enumerate(gamma) for _ in range(g))
    path = tuple(order)
    counts = [0] * gamma.dimension
    for i in path:
        counts[i] += 1
    if tuple(counts) != gamma.exponents:
        raise ConfigError(f"raising order {path} does not spell the word {gamma}")
    return path


def shift_column(
    weights: WeightFamily,
    gamma: MultiIndex,
    m: MultiIndex,
    order: Optional[Sequence[int]] = None,
) -> Tuple[MultiIndex, float]:
    """S^γ e_m = w · e_{m+γ}; returns (m+γ, w)."""
    return m + gamma, sqrt(weights.word_weight_sq(gamma, m, order))
