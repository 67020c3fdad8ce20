"""Composition operators: norms, criteria checkers and the brute-force oracle."""

from .criteria import (
    FAILS,
    HOLDS,
    INCONCLUSIVE,
    Verdict,
    bounded_necessary_check,
    compact_sufficient_check,
    invertibility_check,
    tp0_boundedness_checks,
)
from .isometry import (
    IsometryReport,
    LevelPermutationReport,
    isometry_check_inf,
    isometry_check_q1,
    isometry_check_qge2,
    isometry_level_permutation_check,
)
from .operator import (
    AlphaSequence,
    ComposedFunction,
    NormEstimate,
    alpha_sequence,
    bounded_symbol_check,
    compose_function,
    level_witness,
    norm_infinity,
    operator_norm,
    verify_norm_infinity,
)
from .oracle import OracleResult, brute_force_norm_lower_bound
from .trends import DEFAULT_THRESHOLDS, TrendThresholds, classify_growth

__all__ = [name for name in dir() if not name.startswith("_")]
