"""Constructive factorization of singular rows into idempotents."""

from .euclid_chain import (
    EuclidChain,
    build_chain,
    column_unit_cert,
    column_word,
    row_with_zero_cert,
    unimodular_row_cert,
    zero_row_cert,
)
from .integerize import Case3Context, IntegerizeResult, ShiftPlan, Step, Trace, case3_context, integerize, lift, replay
from .options import PipelineOptions, apply_overrides, options_from_env
from .driver import (
    BOUND_R,
    BOUND_S,
    CzSplit,
    DriverContext,
    check_cz_split,
    cz_case1_split,
    cz_case2_shift,
    driver_context,
    factor_singular_row,
    norm_shift,
    principal_row_cert,
)

__all__ = [
    "BOUND_R", "BOUND_S", "Case3Context", "CzSplit", "DriverContext", "EuclidChain", "IntegerizeResult",
    "PipelineOptions", "ShiftPlan", "Step", "Trace", "apply_overrides", "build_chain", "case3_context",
    "check_cz_split", "column_unit_cert", "column_word", "cz_case1_split", "cz_case2_shift", "driver_context",
    "factor_singular_row", "integerize", "lift", "norm_shift", "options_from_env", "principal_row_cert",
    "replay", "row_with_zero_cert", "unimodular_row_cert", "zero_row_cert",
]
