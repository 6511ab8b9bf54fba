"""
Symbols, operator recipes and compact perturbations.

A term (α, β) ↦ c stands for the function c·z̄^β z^α on the sphere and
for the operator c·S^{β*} S^α on the function space. A HermitianSymbol
keeps c_{βα} = conj(c_{αβ}), which makes the operator self-adjoint and
the function real-valued.
"""
import hashlib
import json
import logging
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

import numpy as np

from src.errors import ConfigError, DimensionMismatch, DomainError, SymbolFileError
from src.multiindex import MultiIndex

logger = logging.getLogger(__name__)

Word = Tuple[MultiIndex, MultiIndex]
OperatorTerms = Dict[Word, complex]

HERMITIAN_TOLERANCE = 1e-12
SPHERE_TOLERANCE = 1e-12


def _close(a: complex, b: complex) -> bool:
    return abs(a - b) <= HERMITIAN_TOLERANCE * max(1.0, abs(a), abs(b))


def shift_word(dimension: int, i: int, adjoint: bool = False) -> OperatorTerms:
    """Terms of the single shift S_i (or S_i* when adjoint)."""
    unit, zero = MultiIndex.unit(dimension, i), MultiIndex.zero(dimension)
    return {(zero, unit): 1.0 + 0j} if adjoint else {(unit, zero): 1.0 + 0j}


def identity_terms(dimension: int) -> OperatorTerms:
    zero = MultiIndex.zero(dimension)
    return {(zero, zero): 1.0 + 0j}


def terms_max_degree(terms: Mapping[Word, complex]) -> int:
    return max((max(a.degree, b.degree) for a, b in terms), default=0)


@dataclass(frozen=True, eq=False)
class HermitianSymbol:
    """
    A finite trigonometric polynomial φ(z) = Σ c_{αβ} z̄^β z^α on ∂B_d.

    Doubles as the recipe of the operator T = Σ c_{αβ} S^{β*} S^α.
    Build through `from_terms` so Hermitian symmetry is enforced.
    """
    dimension: int
    terms: Mapping[Word, complex]
    name: str = ""
    max_degree: int = field(init=False)

    def __post_init__(self):
        for alpha, beta in self.terms:
            if alpha.dimension != self.dimension or beta.dimension != self.dimension:
                raise DimensionMismatch(
                    f"term ({alpha}, {beta}) does not live in dimension {self.dimension}"
                )
        for (alpha, beta), c in self.terms.items():
            partner = self.terms.get((beta, alpha))
            if partner is None or not _close(partner, complex(c).conjugate()):
                raise ConfigError(f"symbol is not Hermitian at term ({alpha}, {beta})")
        object.__setattr__(self, "max_degree", terms_max_degree(self.terms))

    @classmethod
    def from_terms(
        cls,
        dimension: int,
        terms: Iterable[Tuple[MultiIndex, MultiIndex, complex]],
        complete: bool = True,
        name: str = "",
    ) -> "HermitianSymbol":
        """
        Collect (α, β, c) triples into a symbol.

        Args:
            dimension: ball dimension d
            terms: triples; repeated (α, β) keys are summed
            complete: add the missing conjugate partner of any term instead of
                rejecting the symbol
            name: identifier carried into reports
        """
        collected: Dict[Word, complex] = {}
        for alpha, beta, c in terms:
            key = (alpha, beta)
            collected[key] = collected.get(key, 0j) + complex(c)
        if complete:
            for (alpha, beta), c in list(collected.items()):
                if (beta, alpha) not in collected:
                    collected[(beta, alpha)] = c.conjugate()
                    logger.debug(f"[Symbol] Completed conjugate term ({beta}, {alpha})")
        # diagonal words carry real coefficients
        for (alpha, beta), c in collected.items():
            if alpha == beta and abs(c.imag) <= HERMITIAN_TOLERANCE * max(1.0, abs(c)):
                collected[(alpha, beta)] = complex(c.real, 0.0)
        cleaned = {k: v for k, v in collected.items() if v != 0}
        return cls(dimension=dimension, terms=cleaned, name=name)

    @classmethod
    def constant(cls, dimension: int, value: float, name: str = "") -> "HermitianSymbol":
        zero = MultiIndex.zero(dimension)
        return cls.from_terms(dimension, [(zero, zero, value)], name=name or f"const({value:g})")

    @classmethod
    def from_polynomial_pairs(
        cls,
        dimension: int,
        pairs: Iterable[Tuple[Mapping[MultiIndex, complex], Mapping[MultiIndex, complex]]],
        name: str = "",
    ) -> "HermitianSymbol":
        """
        φ = Σ_i conj(p_i) q_i, i.e. T = Σ_i p_i(S)* q_i(S).

        Each polynomial maps exponents to coefficients. The sum must already
        be Hermitian; use `hermitian_square` for p(S)* p(S).
        """
        triples = []
        for p, q in pairs:
            for beta, pc in p.items():
                for alpha, qc in q.items():
                    triples.append((alpha, beta, complex(pc).conjugate() * complex(qc)))
        return cls.from_terms(dimension, triples, complete=False, name=name)

    @classmethod
    def hermitian_square(
        cls, dimension: int, p: Mapping[MultiIndex, complex], name: str = ""
    ) -> "HermitianSymbol":
        """|p|², the symbol of the positive operator p(S)* p(S)."""
        return cls.from_polynomial_pairs(dimension, [(p, p)], name=name)

    @property
    def identifier(self) -> str:
        if self.name:
            return self.name
        digest = hashlib.sha256(json.dumps(self.to_dict(), sort_keys=True).encode()).hexdigest()
        return f"symbol-{digest[:10]}"

    @property
    def is_constant(self) -> bool:
        return self.max_degree == 0

    def coefficient(self, alpha: MultiIndex, beta: MultiIndex) -> complex:
        return self.terms.get((alpha, beta), 0j)

    def shifted(self, c: float) -> "HermitianSymbol":
        """φ + c."""
        zero = MultiIndex.zero(self.dimension)
        triples = [(a, b, v) for (a, b), v in self.terms.items()] + [(zero, zero, c)]
        return HermitianSymbol.from_terms(self.dimension, triples, complete=False, name=self.name)

    def scaled(self, t: float) -> "HermitianSymbol":
        """t·φ for real t."""
        triples = [(a, b, t * v) for (a, b), v in self.terms.items()]
        return HermitianSymbol.from_terms(self.dimension, triples, complete=False, name=self.name)

    def to_dict(self) -> Dict:
        rows = sorted(
            (a.to_list(), b.to_list(), complex(c).real, complex(c).imag)
            for (a, b), c in self.terms.items()
        )
        return {
            "dimension": self.dimension,
            "terms": [{"alpha": a, "beta": b, "re": x, "im": y} for a, b, x, y in rows],
        }


@dataclass(frozen=True, eq=False)
class CompactPerturbation:
    """
    A fixed finite-rank Hermitian matrix in the graded basis.

    Entries below the diagonal are rebuilt as exact conjugates of the
    upper half, and the diagonal is kept real.
    """
    entries: Mapping[Tuple[int, int], complex]

    def __post_init__(self):
        mirrored: Dict[Tuple[int, int], complex] = {}
        for (r, c), v in self.entries.items():
            if r < 0 or c < 0:
                raise ConfigError(f"negative basis rank in perturbation entry ({r}, {c})")
            partner = self.entries.get((c, r))
            if partner is None or not _close(partner, complex(v).conjugate()):
                raise ConfigError(f"perturbation is not Hermitian at entry ({r}, {c})")
            if r == c:
                mirrored[(r, c)] = complex(complex(v).real, 0.0)
            elif r < c:
                mirrored[(r, c)] = complex(v)
                mirrored[(c, r)] = complex(v).conjugate()
        object.__setattr__(self, "entries", mirrored)

    @classmethod
    def from_entries(
        cls, entries: Iterable[Tuple[int, int, complex]], complete: bool = True
    ) -> "CompactPerturbation":
        collected: Dict[Tuple[int, int], complex] = {}
        for r, c, v in entries:
            collected[(int(r), int(c))] = collected.get((int(r), int(c)), 0j) + complex(v)
        if complete:
            for (r, c), v in list(collected.items()):
                if (c, r) not in collected:
                    collected[(c, r)] = v.conjugate()
        return cls({k: v for k, v in collected.items() if v != 0})

    @classmethod
    def zero(cls) -> "CompactPerturbation":
        return cls({})

    @property
    def support_size(self) -> int:
        """Smallest rank whose compression holds every entry."""
        return max((max(r, c) + 1 for r, c in self.entries), default=0)

    def compressed(self, rank: int) -> np.ndarray:
        """P K P on the first `rank` basis vectors, as a dense matrix."""
        block = np.zeros((rank, rank), dtype=complex)
        for (r, c), v in self.entries.items():
            if r < rank and c < rank:
                block[r, c] = v
        return block

    def diagonal_sum(self, rank: int) -> float:
        return sum(v.real for (r, c), v in self.entries.items() if r == c and r < rank)

    def trace_norm(self) -> float:
        """‖K‖₁, the sum of absolute eigenvalues."""
        size = self.support_size
        if size == 0:
            return 0.0
        return float(np.abs(np.linalg.eigvalsh(self.compressed(size))).sum())

    def to_list(self) -> List[Dict]:
        return [
            {"row": r, "col": c, "re": complex(v).real, "im": complex(v).imag}
            for (r, c), v in sorted(self.entries.items())
        ]


def _check_on_sphere(points: np.ndarray) -> None:
    norms = np.linalg.norm(points, axis=-1)
    deviation = np.abs(norms - 1.0)
    if deviation.size and deviation.max() > SPHERE_TOLERANCE:
        worst = int(np.argmax(deviation))
        raise DomainError("point is not on the unit sphere", value=float(np.ravel(norms)[worst]))


def symbol_values(symbol: HermitianSymbol, points: np.ndarray) -> np.ndarray:
    """Evaluate φ at an (n, d) array of sphere points; returns n reals."""
    points = np.atleast_2d(np.asarray(points, dtype=complex))
    if points.shape[1] != symbol.dimension:
        raise DimensionMismatch(
            f"points of dimension {points.shape[1]} for a symbol in dimension {symbol.dimension}"
        )
    _check_on_sphere(points)
    conj = np.conj(points)
    total = np.zeros(points.shape[0], dtype=complex)
    scale = 1.0
    for (alpha, beta), c in symbol.terms.items():
        monomial = np.ones(points.shape[0], dtype=complex)
        for i, (a, b) in enumerate(zip(alpha, beta)):
            if a:
                monomial *= points[:, i] ** a
            if b:
                monomial *= conj[:, i] ** b
        total += c * monomial
        scale += abs(c)
    imag = np.abs(total.imag).max(initial=0.0)
    if imag > HERMITIAN_TOLERANCE * scale:
        raise DomainError("symbol took a non-real value", value=float(imag))
    return total.real


def symbol_eval(symbol: HermitianSymbol, z) -> float:
    """φ(z) for a single point z on ∂B_d."""
    return float(symbol_values(symbol, np.asarray(z, dtype=complex).reshape(1, -1))[0])


def symbol_range_bounds(symbol: HermitianSymbol, samples: int, seed: int = 0) -> Tuple[float, float]:
    """Sampled (min φ, max φ) over uniform sphere points."""
    if samples < 1:
        raise ConfigError(f"need at least one sample, got {samples}")
    if symbol.is_constant:
        value = symbol.coefficient(MultiIndex.zero(symbol.dimension), MultiIndex.zero(symbol.dimension))
        return float(value.real), float(value.real)
    from src.measure.sphere import SphereMeasure

    measure = SphereMeasure(symbol.dimension, seed)
    low, high = np.inf, -np.inf
    for chunk in measure.iter_shards(samples):
        values = symbol_values(symbol, chunk)
        low, high = min(low, float(values.min())), max(high, float(values.max()))
    return low, high


def _parse_complex(entry: Mapping, path: str, line: Optional[int] = None) -> complex:
    try:
        return complex(float(entry.get("re", 0.0)), float(entry.get("im", 0.0)))
    except (TypeError, ValueError) as e:
        raise SymbolFileError(f"bad coefficient {entry!r}: {e}", path, line)


def _parse_index(values, dimension: int, path: str, line: Optional[int] = None) -> MultiIndex:
    if not isinstance(values, list) or len(values) != dimension:
        raise SymbolFileError(f"expected {dimension} exponents, got {values!r}", path, line)
    try:
        return MultiIndex(tuple(int(v) for v in values))
    except (TypeError, ValueError) as e:
        raise SymbolFileError(f"bad multi-index {values!r}: {e}", path, line)


def _parse_rank(value, key: str, path: str, line: Optional[int]) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SymbolFileError(f"perturbation {key} must be an integer, got {value!r}", path, line)
    return value


def entry_lines(text: str, key: str) -> List[int]:
    """1-based line of each element of the top-level array stored under `key`."""
    match = re.search(r'"' + re.escape(key) + r'"\s*:\s*\[', text)
    if match is None:
        return []
    decoder = json.JSONDecoder()
    lines, pos = [], match.end()
    while True:
        while pos < len(text) and text[pos] in " \t\r\n,":
            pos += 1
        if pos >= len(text) or text[pos] == "]":
            return lines
        lines.append(text.count("\n", 0, pos) + 1)
        try:
            _, pos = decoder.raw_decode(text, pos)
        except json.JSONDecodeError:
            return lines


def _section(document: Mapping, key: str, path: str) -> List:
    values = document.get(key) or []
    if not isinstance(values, list):
        raise SymbolFileError(f"'{key}' must be a list, got {type(values).__name__}", path)
    return values


def _term(entry, dimension: int, path: str, line: Optional[int]) -> Tuple[MultiIndex, MultiIndex, complex]:
    if not isinstance(entry, Mapping):
        raise SymbolFileError(f"term must be an object, got {entry!r}", path, line)
    missing = [k for k in ("alpha", "beta") if k not in entry]
    if missing:
        raise SymbolFileError(f"term is missing {', '.join(missing)}", path, line)
    alpha = _parse_index(entry["alpha"], dimension, path, line)
    beta = _parse_index(entry["beta"], dimension, path, line)
    return alpha, beta, _parse_complex(entry, path, line)


def _perturbation_entry(entry, path: str, line: Optional[int]) -> Tuple[int, int, complex]:
    if isinstance(entry, Mapping):
        missing = [k for k in ("row", "col") if k not in entry]
        if missing:
            raise SymbolFileError(f"perturbation entry is missing {', '.join(missing)}", path, line)
        row, col = entry["row"], entry["col"]
        value = _parse_complex(entry, path, line)
    elif isinstance(entry, list) and len(entry) in (3, 4):
        row, col = entry[0], entry[1]
        value = _parse_complex({"re": entry[2], "im": entry[3] if len(entry) == 4 else 0.0}, path, line)
    else:
        raise SymbolFileError(
            f"perturbation entry must be {{row, col, re, im}} or [row, col, re(, im)], got {entry!r}", path, line
        )
    return _parse_rank(row, "row", path, line), _parse_rank(col, "col", path, line), value


def parse_symbol_document(
    document: Mapping,
    path: str = "<memory>",
    complete: bool = True,
    name: str = "",
    lines: Optional[Mapping[str, List[int]]] = None,
) -> Tuple[HermitianSymbol, Optional[CompactPerturbation]]:
    """
    Build a symbol (and optional perturbation) from a decoded symbol document.

    `lines` maps "terms"/"perturbation" to the source line of each entry,
    so errors can point at the offending entry.
    """
    lines = lines or {}

    def line_of(key: str, i: int) -> Optional[int]:
        known = lines.get(key, [])
        return known[i] if i < len(known) else None

    if not isinstance(document, Mapping) or "dimension" not in document or "terms" not in document:
        raise SymbolFileError("document needs 'dimension' and 'terms'", path)
    dimension = document["dimension"]
    if isinstance(dimension, bool) or not isinstance(dimension, int) or dimension < 1:
        raise SymbolFileError(f"dimension must be a positive integer, got {dimension!r}", path)

    triples = [
        _term(entry, dimension, path, line_of("terms", i))
        for i, entry in enumerate(_section(document, "terms", path))
    ]
    try:
        symbol = HermitianSymbol.from_terms(
            dimension, triples, complete=complete, name=str(document.get("name", name))
        )
    except ConfigError as e:
        raise SymbolFileError(str(e), path)

    perturbation = None
    raw = [
        _perturbation_entry(entry, path, line_of("perturbation", i))
        for i, entry in enumerate(_section(document, "perturbation", path))
    ]
    if raw:
        try:
            perturbation = CompactPerturbation.from_entries(raw, complete=complete)
        except ConfigError as e:
            raise SymbolFileError(str(e), path)
    return symbol, perturbation


def load_symbol_file(
    path: str, complete: bool = True
) -> Tuple[HermitianSymbol, Optional[CompactPerturbation]]:
    """
    Load a JSON symbol definition.

    Format: {"dimension": d, "terms": [{"alpha": [..], "beta": [..], "re": x, "im": y}],
    "perturbation": [{"row": i, "col": j, "re": x, "im": y}]}.
    """
    try:
        with open(path, "r") as f:
            text = f.read()
        document = json.loads(text)
    except FileNotFoundError:
        raise SymbolFileError("file not found", path)
    except json.JSONDecodeError as e:
        raise SymbolFileError(e.msg, path, line=e.lineno)
    lines = {key: entry_lines(text, key) for key in ("terms", "perturbation")}
    default_name = path.rsplit("/", 1)[-1].rsplit(".", 1)[0]
    symbol, perturbation = parse_symbol_document(document, path, complete, name=default_name, lines=lines)
    logger.info(
        f"[Symbol] Loaded {symbol.identifier} from {path}: d={symbol.dimension}, "
        f"{len(symbol.terms)} terms, max degree {symbol.max_degree}"
    )
    return symbol, perturbation
