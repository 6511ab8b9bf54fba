# Toeplitz-like operators on the Drury-Arveson and weighted Bergman spaces
from .weights import SpaceKind, WeightFamily, shift_column
from .symbols import (
    CompactPerturbation,
    HermitianSymbol,
    OperatorTerms,
    identity_terms,
    entry_lines,
    load_symbol_file,
    parse_symbol_document,
    shift_word,
    symbol_eval,
    symbol_range_bounds,
    symbol_values,
    terms_max_degree,
)
from .assembly import (
    DEFAULT_MAX_DENSE_RANK,
    TruncatedOperator,
    assemble_matrix,
    assemble_perturbation,
    assemble_truncation,
    commutator_norm_sq_assembled,
    commutator_norm_sq_exact,
    mixed_word_trace_is_zero,
    shift_matrix,
    trace_enumerated,
    trace_exact,
)

__all__ = [
    "SpaceKind",
    "WeightFamily",
    "shift_column",
    "CompactPerturbation",
    "HermitianSymbol",
    "OperatorTerms",
    "identity_terms",
    "entry_lines",
    "load_symbol_file",
    "parse_symbol_document",
    "shift_word",
    "symbol_eval",
    "symbol_range_bounds",
    "symbol_values",
    "terms_max_degree",
    "DEFAULT_MAX_DENSE_RANK",
    "TruncatedOperator",
    "assemble_matrix",
    "assemble_perturbation",
    "assemble_truncation",
    "commutator_norm_sq_assembled",
    "commutator_norm_sq_exact",
    "mixed_word_trace_is_zero",
    "shift_matrix",
    "trace_enumerated",
    "trace_exact",
]
