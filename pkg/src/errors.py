"""
Exception hierarchy for the Szegő toolkit.

Every error carries the exit code the `szego` CLI returns when it
surfaces at the top level.
"""
from typing import Optional


class SzegoError(Exception):
    """Base class for all library errors."""
    exit_code = 1


class InvariantFailure(SzegoError):
    """An enabled invariant did not hold."""
    exit_code = 1


class ConfigError(SzegoError, ValueError):
    """Invalid experiment configuration."""
    exit_code = 2


class SymbolFileError(ConfigError):
    """A symbol definition file could not be parsed."""

    def __init__(self, message: str, path: str, line: Optional[int] = None):
        location = f"{path}:{line}" if line is not None else path
        super().__init__(f"{location}: {message}")
        self.path = path
        self.line = line


class DimensionMismatch(SzegoError, ValueError):
    """Objects built for different ball dimensions were combined."""
    exit_code = 2


class PreconditionError(SzegoError, ValueError):
    """An operation was called outside its documented domain."""
    exit_code = 2


class IndexRangeError(SzegoError, IndexError):
    """Rank or multi-index outside the truncated basis."""
    exit_code = 2


class UnsupportedWeightFamily(SzegoError, NotImplementedError):
    """The operation has no formula for the requested weight family."""
    exit_code = 2


class DomainError(SzegoError, ValueError):
    """A test function was evaluated outside its domain."""
    exit_code = 5

    def __init__(self, message: str, value: Optional[float] = None):
        if value is not None:
            message = f"{message} (offending value: {value!r})"
        super().__init__(message)
        self.value = value


class PositivityError(DomainError):
    """A symbol or truncation expected to be positive is not."""
    exit_code = 3


class RankCapExceeded(SzegoError):
    """The truncation rank is above the configured safety cap."""
    exit_code = 4

    def __init__(self, rank: int, cap: int, what: str = "truncation"):
        super().__init__(f"{what} rank {rank} exceeds the safety cap {cap}")
        self.rank = rank
        self.cap = cap


class SpectralError(SzegoError, RuntimeError):
    """The eigen-solver failed or returned inaccurate pairs."""
    exit_code = 6


class ExpansionCapExceeded(SzegoError):
    """Symbolic expansion of a power of the symbol grew too large."""
    exit_code = 7

    def __init__(self, size: int, cap: int):
        super().__init__(
            f"expansion reached {size} monomial pairs (cap {cap}); "
            "use Monte Carlo integration instead"
        )
        self.size = size
        self.cap = cap
