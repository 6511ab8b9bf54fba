"""
Multi-indices and the graded basis of the truncated Drury-Arveson space.

The basis of P_N H is indexed by all α ∈ ℕ^d with |α| ≤ N. We fix the
graded-lexicographic order: degree ascending, and within a degree the
exponent vectors in descending lexicographic order, so for d = 2 the
degree-2 slab reads (2,0), (1,1), (0,2).
"""
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import comb, factorial, prod
from typing import Dict, Iterator, List, Sequence, Tuple

from src.errors import IndexRangeError, PreconditionError, RankCapExceeded, DimensionMismatch

DEFAULT_MAX_RANK = 20000


@dataclass(frozen=True)
class MultiIndex:
    """An exponent vector α = (α_1, ..., α_d) with cached degree |α|."""
    exponents: Tuple[int, ...]
    degree: int = field(init=False, compare=False)

    def __post_init__(self):
        exponents = tuple(int(e) for e in self.exponents)
        if not exponents:
            raise PreconditionError("a multi-index needs at least one coordinate")
        if any(e < 0 for e in exponents):
            raise PreconditionError(f"negative exponent in {exponents}")
        object.__setattr__(self, "exponents", exponents)
        object.__setattr__(self, "degree", sum(exponents))

    @classmethod
    def of(cls, *exponents: int) -> "MultiIndex":
        return cls(tuple(exponents))

    @classmethod
    def zero(cls, dimension: int) -> "MultiIndex":
        return cls((0,) * dimension)

    @classmethod
    def unit(cls, dimension: int, i: int) -> "MultiIndex":
        """The index e_i (0-based coordinate i)."""
        if not 0 <= i < dimension:
            raise IndexRangeError(f"coordinate {i} outside 0..{dimension - 1}")
        return cls(tuple(1 if k == i else 0 for k in range(dimension)))

    @property
    def dimension(self) -> int:
        return len(self.exponents)

    @property
    def factorial(self) -> int:
        """α! = α_1! ··· α_d! as an exact integer."""
        return prod(factorial(e) for e in self.exponents)

    @property
    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return self.degree, tuple(-e for e in self.exponents)

    def raised(self, i: int, times: int = 1) -> "MultiIndex":
        exps = list(self.exponents)
        exps[i] += times
        return MultiIndex(tuple(exps))

    def difference(self, other: "MultiIndex") -> Tuple[int, ...]:
        """Signed coordinate difference self − other (not a multi-index)."""
        self._check_dimension(other)
        return tuple(a - b for a, b in zip(self.exponents, other.exponents))

    def _check_dimension(self, other: "MultiIndex") -> None:
        if other.dimension != self.dimension:
            raise DimensionMismatch(f"dimensions {self.dimension} and {other.dimension} differ")

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        self._check_dimension(other)
        return MultiIndex(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def __lt__(self, other: "MultiIndex") -> bool:
        return self.sort_key < other.sort_key

    def __iter__(self) -> Iterator[int]:
        return iter(self.exponents)

    def __getitem__(self, i: int) -> int:
        return self.exponents[i]

    def to_list(self) -> List[int]:
        return list(self.exponents)

    def __repr__(self):
        return f"MultiIndex{self.exponents}"


def slab_size(dimension: int, degree: int) -> int:
    """Number of α ∈ ℕ^d with |α| = j, i.e. C(j+d−1, d−1)."""
    return comb(degree + dimension - 1, dimension - 1)


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


@lru_cache(maxsize=512)
def enumerate_slab(dimension: int, degree: int) -> Tuple[MultiIndex, ...]:
    """All multi-indices of the given degree, in descending lexicographic order."""
    if dimension < 1 or degree < 0:
        raise PreconditionError(f"need d >= 1 and j >= 0, got d={dimension}, j={degree}")
    return tuple(MultiIndex(c) for c in _compositions(degree, dimension))


def _slab_position(alpha: MultiIndex) -> int:
    position = 0
    remaining = alpha.degree
    d = alpha.dimension
    for i in range(d - 1):
        parts_after = d - i - 1
        a = alpha[i]
        if remaining > a:
            # compositions whose coordinate i is larger than a
            position += comb(remaining - a - 1 + parts_after, parts_after)
        remaining -= a
    return position


def _slab_unrank(dimension: int, degree: int, position: int) -> MultiIndex:
    exps = []
    remaining = degree
    for i in range(dimension - 1):
        parts_after = dimension - i - 1
        for value in range(remaining, -1, -1):
            count = comb(remaining - value + parts_after - 1, parts_after - 1)
            if position < count:
                exps.append(value)
                remaining -= value
                break
            position -= count
    exps.append(remaining)
    return MultiIndex(tuple(exps))


@dataclass(frozen=True)
class GradedBasisIndexer:
    """
    Ranks the basis {e_α : |α| ≤ N} in graded-lexicographic order.

    Args:
        dimension: ball dimension d
        cutoff: degree cutoff N
        max_rank: safety cap on d_N (RankCapExceeded above it)
    """
    dimension: int
    cutoff: int
    max_rank: int = DEFAULT_MAX_RANK
    total_rank: int = field(init=False)
    slab_offsets: Tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        if self.dimension < 1 or self.cutoff < 0:
            raise PreconditionError(
                f"need d >= 1 and N >= 0, got d={self.dimension}, N={self.cutoff}"
            )
        offsets = [0]
        for j in range(self.cutoff + 1):
            offsets.append(offsets[-1] + slab_size(self.dimension, j))
        if offsets[-1] > self.max_rank:
            raise RankCapExceeded(offsets[-1], self.max_rank, what="basis")
        object.__setattr__(self, "slab_offsets", tuple(offsets))
        object.__setattr__(self, "total_rank", offsets[-1])

    def rank_of_degree(self, degree: int) -> int:
        """d_j: number of basis elements with degree ≤ j (j ≤ N)."""
        return self.slab_offsets[degree + 1]

    def rank(self, alpha: MultiIndex) -> int:
        if alpha.dimension != self.dimension:
            raise DimensionMismatch(f"index {alpha} does not live in dimension {self.dimension}")
        if alpha.degree > self.cutoff:
            raise IndexRangeError(f"{alpha} has degree {alpha.degree} > cutoff {self.cutoff}")
        return self.slab_offsets[alpha.degree] + _slab_position(alpha)

    def unrank(self, k: int) -> MultiIndex:
        if not 0 <= k < self.total_rank:
            raise IndexRangeError(f"rank {k} outside 0..{self.total_rank - 1}")
        degree = 0
        while self.slab_offsets[degree + 1] <= k:
            degree += 1
        return _slab_unrank(self.dimension, degree, k - self.slab_offsets[degree])

    def contains(self, alpha: MultiIndex) -> bool:
        return alpha.dimension == self.dimension and alpha.degree <= self.cutoff

    @cached_property
    def basis(self) -> Tuple[MultiIndex, ...]:
        """The basis in rank order."""
        return tuple(
            alpha for j in range(self.cutoff + 1) for alpha in enumerate_slab(self.dimension, j)
        )

    @cached_property
    def positions(self) -> Dict[MultiIndex, int]:
        return {alpha: k for k, alpha in enumerate(self.basis)}

    def restricted(self, cutoff: int) -> "GradedBasisIndexer":
        return GradedBasisIndexer(self.dimension, cutoff, self.max_rank)

    def slab(self, degree: int) -> Sequence[MultiIndex]:
        return enumerate_slab(self.dimension, degree)
