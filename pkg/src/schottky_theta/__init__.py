"""Theta functions, pairings and period matrices of p-adic Schottky groups."""

from .bounds import BoundsData, compute_bounds, nu_for_target, tail_valuation
from .fast import (
    DivisorPositionError,
    EvaluationDomainError,
    FrameInvariantError,
    PeriodMatrix,
    canonical_embedding,
    pair_truncation,
    period_matrix,
    theta_eval,
    theta_pair,
    theta_series,
    u_gamma_dlog,
    worst_case_nu,
)
from .localfield import (
    DEFAULT_GUARD_DIGITS,
    FieldDescriptor,
    LocalFieldElement,
    PrecisionError,
    Qp,
    eisenstein,
    parse_rational_literal,
)
from .naive import (
    DEFAULT_WORD_BUDGET,
    BudgetExceededError,
    SupportCollisionError,
    TruncatedTheta,
    theta_discontinuous,
    theta_naive,
    theta_naive_auto,
)
from .projline import (
    INFINITY,
    Ball,
    Divisor0,
    Moebius,
    UndefinedCrossRatioError,
    cross_ratio,
    pair_divisors,
)
from .schottky import (
    BadGroupError,
    GoodPositionReport,
    SchottkyGroup,
    divisor_from_json,
    group_from_json,
    group_to_json,
    load_divisor,
    load_group,
    save_group,
    word_count,
)
from .tate import TateSeries

__all__ = [
    "BadGroupError",
    "Ball",
    "BoundsData",
    "BudgetExceededError",
    "DEFAULT_GUARD_DIGITS",
    "DEFAULT_WORD_BUDGET",
    "Divisor0",
    "DivisorPositionError",
    "EvaluationDomainError",
    "FieldDescriptor",
    "FrameInvariantError",
    "GoodPositionReport",
    "INFINITY",
    "LocalFieldElement",
    "Moebius",
    "PeriodMatrix",
    "PrecisionError",
    "Qp",
    "SchottkyGroup",
    "SupportCollisionError",
    "TateSeries",
    "TruncatedTheta",
    "UndefinedCrossRatioError",
    "canonical_embedding",
    "compute_bounds",
    "cross_ratio",
    "divisor_from_json",
    "eisenstein",
    "group_from_json",
    "group_to_json",
    "load_divisor",
    "load_group",
    "nu_for_target",
    "pair_divisors",
    "pair_truncation",
    "parse_rational_literal",
    "period_matrix",
    "save_group",
    "tail_valuation",
    "theta_discontinuous",
    "theta_eval",
    "theta_naive",
    "theta_naive_auto",
    "theta_pair",
    "theta_series",
    "u_gamma_dlog",
    "word_count",
]
