# Quantitative checks of the Følner and trace-limit hypotheses
from .tables import ConvergenceRow, ConvergenceTable
from .folner import (
    SubadditivityReport,
    folner_bound_sq,
    folner_ratio_commutator,
    folner_ratio_corner,
    folner_table,
    ratios_from_matrix,
    shift_ratio_sq_exact,
    single_shift,
    subadditivity_check,
)
from .traces import (
    IntegrationSpec,
    PushforwardReference,
    SzegoGap,
    chi_exact,
    chi_limit_table,
    compact_decay_holds,
    compact_decay_table,
    operator_szego_gap,
    pushforward_reference,
    state_bound_holds,
    state_normalized,
    szego_gap,
)

__all__ = [
    "ConvergenceRow",
    "ConvergenceTable",
    "SubadditivityReport",
    "folner_bound_sq",
    "folner_ratio_commutator",
    "folner_ratio_corner",
    "folner_table",
    "ratios_from_matrix",
    "shift_ratio_sq_exact",
    "single_shift",
    "subadditivity_check",
    "IntegrationSpec",
    "PushforwardReference",
    "SzegoGap",
    "chi_exact",
    "chi_limit_table",
    "compact_decay_holds",
    "compact_decay_table",
    "operator_szego_gap",
    "pushforward_reference",
    "state_bound_holds",
    "state_normalized",
    "szego_gap",
]
