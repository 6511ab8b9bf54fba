"""
Eigenvalues of truncations and their empirical spectral distributions.

μ_T^N puts mass 1/d_N on each eigenvalue of P_N T P_N, counting
multiplicity.
"""
import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, Optional, Sequence, Union

import numpy as np
import scipy.linalg

from src.errors import PositivityError, SpectralError
from src.operators import TruncatedOperator
from src.spectral.functions import POSITIVITY_THRESHOLD, TestFunction, apply_test_function

logger = logging.getLogger(__name__)

RESIDUAL_TOLERANCE = 1e-8


def eigenvalues_hermitian(matrix: np.ndarray, provenance: str = "matrix") -> np.ndarray:
    """
    Full spectrum of a Hermitian matrix, ascending, with multiplicity.

    The smallest, median and largest pairs are recomputed with eigenvectors
    and must satisfy ‖Mv − λv‖ ≤ 1e-8·‖M‖.
    """
    n = matrix.shape[0]
    if n == 0:
        return np.zeros(0)
    try:
        values = scipy.linalg.eigh(matrix, eigvals_only=True)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise SpectralError(f"eigen-solver failed on {provenance}: {e}")
    scale = float(np.max(np.abs(values)))
    for k in sorted({0, n // 2, n - 1}):
        try:
            w, v = scipy.linalg.eigh(matrix, subset_by_index=[k, k])
        except (np.linalg.LinAlgError, ValueError) as e:
            raise SpectralError(f"eigenvector check failed on {provenance}: {e}")
        residual = float(np.linalg.norm(matrix @ v[:, 0] - w[0] * v[:, 0]))
        if residual > RESIDUAL_TOLERANCE * max(scale, np.finfo(float).tiny):
            raise SpectralError(
                f"eigenpair {k} of {provenance} has residual {residual:.3e} (‖M‖={scale:.3e})"
            )
    return np.sort(values)


@dataclass(frozen=True, eq=False)
class EmpiricalSpectralDistribution:
    """Uniform probability measure on the eigenvalues of one truncation."""
    eigenvalues: np.ndarray
    dimension: int
    cutoff: int
    symbol_id: str = ""

    def __post_init__(self):
        values = np.array(self.eigenvalues, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise SpectralError("an empirical distribution needs at least one eigenvalue")
        if not np.all(np.isfinite(values)):
            raise SpectralError("eigenvalues must be finite")
        if np.any(np.diff(values) < 0):
            values = np.sort(values)
        values.setflags(write=False)
        object.__setattr__(self, "eigenvalues", values)

    @classmethod
    def from_values(cls, values: Sequence[float], dimension: int = 0, cutoff: int = 0,
                    symbol_id: str = "") -> "EmpiricalSpectralDistribution":
        return cls(np.sort(np.asarray(values, dtype=float)), dimension, cutoff, symbol_id)

    @property
    def rank(self) -> int:
        return int(self.eigenvalues.size)

    @property
    def weight(self) -> float:
        return 1.0 / self.rank

    @property
    def support(self):
        return float(self.eigenvalues[0]), float(self.eigenvalues[-1])

    def cdf(self, x) -> np.ndarray:
        return np.searchsorted(self.eigenvalues, x, side="right") / self.rank

    def provenance(self) -> Dict:
        return {"d": self.dimension, "N": self.cutoff, "d_N": self.rank, "symbol": self.symbol_id}

    def to_csv(self, path: Union[str, Path], header: Optional[str] = None) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as f:
            if header:
                f.write(f"# {header}\n")
            f.write(
                f"# d={self.dimension} N={self.cutoff} d_N={self.rank} symbol={self.symbol_id}\n"
            )
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["index", "eigenvalue"])
            for k, value in enumerate(self.eigenvalues):
                writer.writerow([k, repr(float(value))])
        return path


def empirical_distribution(operator: TruncatedOperator) -> EmpiricalSpectralDistribution:
    provenance = f"{operator.symbol_id} (d={operator.dimension}, N={operator.cutoff}, {operator.weights.label})"
    values = eigenvalues_hermitian(operator.matrix, provenance)
    logger.debug(f"[Spectral] {provenance}: spectrum in [{values[0]:.6g}, {values[-1]:.6g}]")
    return EmpiricalSpectralDistribution(values, operator.dimension, operator.cutoff, operator.symbol_id)


def esd_mean_of(f: Union[TestFunction, Callable], esd: EmpiricalSpectralDistribution) -> float:
    """∫ f dμ_T^N = (1/d_N) Σ f(λ_i)."""
    return float(np.mean(apply_test_function(f, esd.eigenvalues)))


def chi_N(operator: TruncatedOperator) -> float:
    """Tr(P_N T P_N) / rank(P_N)."""
    return operator.trace() / operator.rank


def geometric_mean(esd: EmpiricalSpectralDistribution, threshold: float = POSITIVITY_THRESHOLD) -> float:
    """det(P_N T P_N)^{1/d_N} = exp((1/d_N) Σ log λ_i)."""
    smallest = float(esd.eigenvalues[0])
    if smallest <= threshold:
        raise PositivityError("geometric mean needs a positive truncation", value=smallest)
    return float(np.exp(np.mean(np.log(esd.eigenvalues))))


def _sorted_sample(x) -> np.ndarray:
    if isinstance(x, EmpiricalSpectralDistribution):
        return x.eigenvalues
    values = np.sort(np.asarray(x, dtype=float).ravel())
    if values.size == 0:
        raise SpectralError("cannot compare an empty sample")
    return values


def kolmogorov_distance(a, b) -> float:
    """sup_x |F_a(x) − F_b(x)| between two empirical distributions (or samples)."""
    xa, xb = _sorted_sample(a), _sorted_sample(b)
    grid = np.union1d(xa, xb)
    fa = np.searchsorted(xa, grid, side="right") / xa.size
    fb = np.searchsorted(xb, grid, side="right") / xb.size
    return float(np.max(np.abs(fa - fb)))


def spectrum_containment(esd: EmpiricalSpectralDistribution, low: float, high: float,
                         tolerance: float = 1e-9) -> int:
    """Number of eigenvalues outside [low, high] (with slack)."""
    values = esd.eigenvalues
    return int(np.sum((values < low - tolerance) | (values > high + tolerance)))


def tridiagonal_toeplitz_eigenvalues(a0: float, a1: complex, size: int) -> np.ndarray:
    """Closed-form spectrum a0 + 2|a1| cos(kπ/(n+1)), k = 1..n, of the Hardy-space section."""
    k = np.arange(1, size + 1)
    return np.sort(a0 + 2.0 * abs(a1) * np.cos(k * np.pi / (size + 1)))
